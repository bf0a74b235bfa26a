#include <doctest.h>

#include <random>

#include "kfree/error.hpp"
#include "kfree/field.hpp"
#include "kfree/poly.hpp"
#include "kfree/poly_text.hpp"
#include "oracles.hpp"

using namespace kfree;

namespace {

Poly P(const Field& F, std::vector<Elem> c) { return Poly(F, std::move(c)); }

Poly random_poly_of(const Field& F, int max_deg, std::mt19937_64& rng) {
  std::vector<Elem> c(max_deg + 1);
  for (auto& e : c) e = static_cast<Elem>(rng() % F.q());
  return Poly(F, c);
}

const std::vector<std::uint32_t> kOrders{2, 3, 4, 5, 7, 8, 9, 25, 27};

}  // namespace

TEST_CASE("field construction") {
  CHECK(make_field(2, 1).q() == 2);
  CHECK(make_field(2, 1).modulus() == std::vector<std::uint32_t>{0, 1});
  CHECK(make_field(3, 1).q() == 3);
  CHECK(make_field(2, 2).modulus() == std::vector<std::uint32_t>{1, 1, 1});
  CHECK(&make_field(2, 2) == &make_field_of_order(4));
  CHECK_THROWS_AS(make_field(6, 1), DomainError);
  CHECK_THROWS_AS(make_field(2, 0), DomainError);
  CHECK_THROWS_AS(make_field(2, 17), DomainError);
  CHECK_THROWS_AS(make_field_of_order(12), DomainError);
  CHECK(prime_power_split(27) == std::pair<std::uint32_t, std::uint32_t>{3, 3});
  CHECK(prime_power_split(6).first == 0);
}

TEST_CASE("field arithmetic examples") {
  const Field& F2 = make_field(2, 1);
  CHECK(F2.add(1, 1) == 0);
  const Field& F4 = make_field(2, 2);
  const Elem x = F4.from_coords(std::vector<std::uint32_t>{0, 1});
  CHECK(F4.mul(x, x) == F4.from_coords(std::vector<std::uint32_t>{1, 1}));
  const Field& F5 = make_field(5, 1);
  CHECK(F5.inv(2) == 3);
  CHECK_THROWS_AS(F5.inv(0), DivisionByZero);
  CHECK(F5.from_int(-1) == 4);
}

TEST_CASE("field axioms against coordinate arithmetic") {
  for (auto q : kOrders) {
    const Field& F = make_field_of_order(q);
    CAPTURE(q);
    // the modulus is irreducible over GF(p)
    if (F.f() > 1) {
      const Field& Fp = make_field(F.p(), 1);
      oracle::Coeffs m(F.modulus().begin(), F.modulus().end());
      CHECK(oracle::irreducible(Fp, m));
    }
    for (Elem a = 0; a < q; ++a) {
      CHECK(F.pth_root(F.frobenius(a)) == a);
      if (a != 0) CHECK(F.mul(a, F.inv(a)) == 1);
      for (Elem b = 0; b < q; ++b) {
        CHECK(F.add(a, b) == oracle::add(F, a, b));
        CHECK(F.mul(a, b) == F.mul_by_coords(a, b));
        CHECK(F.sub(F.add(a, b), b) == a);
      }
    }
    // the generator has order q - 1
    Elem g = F.generator(), t = g;
    std::uint32_t order = 1;
    while (t != 1) {
      t = F.mul(t, g);
      ++order;
    }
    CHECK(order == q - 1);
  }
}

TEST_CASE("field element wrapper") {
  const Field& F = make_field(3, 2);
  FieldElement a(F, 5), b(F, 7);
  CHECK((a * b).value() == F.mul(5, 7));
  CHECK(((a / b) * b) == a);
  CHECK((a - a).is_zero());
  CHECK((-a + a).is_zero());
  CHECK(a.pow(F.q() - 1).value() == 1);
}

TEST_CASE("polynomial examples") {
  const Field& F2 = make_field(2, 1);
  const Field& F3 = make_field(3, 1);
  CHECK(gcd(P(F2, {1, 0, 1}), P(F2, {1, 1})) == P(F2, {1, 1}));
  const auto [qt, r] = divrem(P(F3, {1, 2, 0, 1}), P(F3, {1, 0, 1}));
  CHECK(qt == P(F3, {0, 1}));
  CHECK(r == P(F3, {1, 1}));
  CHECK(gcd(P(F3, {2, 0, 2}), Poly(F3)) == P(F3, {1, 0, 1}));
  CHECK(gcd(Poly(F3), Poly(F3)).is_zero());
  CHECK_THROWS_AS(divrem(P(F3, {1}), Poly(F3)), DivisionByZero);
  CHECK_THROWS_AS(P(F2, {1}) + P(F3, {1}), FieldMismatch);
}

TEST_CASE("derivative, pth root and antiderivative examples") {
  const Field& F2 = make_field(2, 1);
  const Field& F3 = make_field(3, 1);
  CHECK(derivative(P(F2, {1, 0, 1, 1})) == P(F2, {0, 0, 1}));
  CHECK(derivative(P(F3, {0, 0, 0, 1})).is_zero());
  const Poly d = derivative(P(F2, {0, 1, 0, 1, 1}));
  CHECK(d == P(F2, {1, 0, 1}));
  CHECK(in_pattern(d, {1}));
  CHECK(pth_root(P(F2, {1, 0, 1})) == P(F2, {1, 1}));
  const Poly r = pth_root(P(F3, {1, 0, 0, 2, 0, 0, 1}));
  CHECK(r == P(F3, {1, 2, 1}));
  CHECK(pow(r, 3) == P(F3, {1, 0, 0, 2, 0, 0, 1}));
  CHECK_THROWS_AS(pth_root(P(F3, {0, 1})), DomainError);
  CHECK(obvious_antiderivative(Poly(F3)).is_zero());
  CHECK(obvious_antiderivative(P(F3, {0, 1})) == P(F3, {0, 0, 2}));
  CHECK(obvious_antiderivative(P(F2, {0, 0, 1})) == P(F2, {0, 0, 0, 1}));
  CHECK_THROWS_AS(obvious_antiderivative(P(F3, {0, 0, 1})), DomainError);
  CHECK(in_pattern(Poly(F3), {0}));
  CHECK(in_pattern(P(F2, {1, 0, 1}), {1}));
  CHECK_FALSE(in_pattern(P(F3, {0, 1, 0, 0, 1}), {1}));
}

TEST_CASE("ring operations match the reference arithmetic") {
  std::mt19937_64 rng(7);
  for (auto q : kOrders) {
    const Field& F = make_field_of_order(q);
    CAPTURE(q);
    for (int trial = 0; trial < 60; ++trial) {
      const Poly a = random_poly_of(F, 1 + static_cast<int>(rng() % 9), rng);
      Poly b = random_poly_of(F, static_cast<int>(rng() % 6), rng);
      if (b.is_zero()) b = Poly::constant(F, 1);
      CHECK(a * b == oracle::to(F, oracle::pmul(F, oracle::from(a), oracle::from(b))));
      CHECK(a + b == oracle::to(F, oracle::padd(F, oracle::from(a), oracle::from(b))));
      CHECK(a - b == oracle::to(F, oracle::psub(F, oracle::from(a), oracle::from(b))));
      const auto [qt, r] = divrem(a, b);
      CHECK(qt * b + r == a);
      CHECK(r.degree() < b.degree());
      CHECK(r == oracle::to(F, oracle::prem(F, oracle::from(a), oracle::from(b))));
      const auto e = extended_gcd(a, b);
      CHECK(e.g == gcd(a, b));
      CHECK(e.s * a + e.t * b == e.g);
      CHECK(divides(e.g, a));
      CHECK(divides(e.g, b));
      // Leibniz rule
      CHECK(derivative(a * b) == derivative(a) * b + a * derivative(b));
      // pth_root is a left inverse of the p-th power
      CHECK(pth_root(pow(a, F.p())) == a);
      // D^{p-1} holds every derivative, and the antiderivative inverts it there
      const Poly da = derivative(a);
      CHECK(in_pattern(da, {F.p() - 1}));
      CHECK(derivative(obvious_antiderivative(da)) == da);
      // in_pth_power_subring agrees with a vanishing derivative
      CHECK(in_pth_power_subring(a) == derivative(a).is_zero());
      if (!b.is_constant()) {
        const Poly m = b.monic();
        CHECK(pow_mod(a, 7, m) == pow(a, 7) % m);
      }
    }
  }
}

TEST_CASE("numeric order and index encoding") {
  const Field& F3 = make_field(3, 1);
  for (std::uint64_t i = 0; i < 200; ++i) {
    CHECK(Poly::from_index(F3, i).index() == i);
    CHECK(Poly::from_index(F3, i) < Poly::from_index(F3, i + 1));
  }
  CHECK(Poly::monic_from_index(F3, 2, 4) == P(F3, {1, 1, 1}));
  CHECK(clear_low(P(F3, {1, 2, 1, 1}), 1) == P(F3, {0, 0, 1, 1}));
}

TEST_CASE("text encoding round trip") {
  const Field& F2 = make_field(2, 1);
  CHECK(to_text(P(F2, {1, 1, 0, 1})) == "1101");
  CHECK(parse_poly(F2, "1101") == P(F2, {1, 1, 0, 1}));
  CHECK(parse_poly(F2, "11000") == P(F2, {1, 1}));
  CHECK(to_text(Poly(F2)) == "0");
  const Field& F11 = make_field(11, 1);
  CHECK(to_text(P(F11, {3, 0, 1})) == "3,0,1");
  CHECK_THROWS(parse_poly(F2, "12"));
  std::mt19937_64 rng(3);
  for (auto q : {2u, 9u, 11u, 25u, 27u, 121u}) {
    const Field& F = make_field_of_order(q);
    for (int t = 0; t < 50; ++t) {
      const Poly a = random_poly_of(F, static_cast<int>(rng() % 8), rng);
      CHECK(parse_poly(F, to_text(a)) == a);
    }
  }
}
