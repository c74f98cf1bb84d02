#include <gtest/gtest.h>

#include <cmath>

#include "nckit/boolean_lp.hpp"
#include "nckit/modular.hpp"
#include "nckit/random.hpp"

using namespace nckit;

namespace {

MeasureVector random_measure(int atoms, Rng& rng) {
  std::vector<double> w;
  for (int a = 0; a < atoms; ++a) w.push_back(rng.uniform(0.1, 3.0));
  return MeasureVector(std::move(w));
}

std::vector<double> random_function(int atoms, Rng& rng) {
  std::vector<double> f;
  for (int a = 0; a < atoms; ++a) f.push_back(rng.uniform(-2.0, 2.0));
  return f;
}

}  // namespace

TEST(BooleanAlgebra, LatticeLawsExhaustive) {
  for (int atoms = 1; atoms <= 4; ++atoms) {
    const FiniteBooleanAlgebra b(atoms);
    EXPECT_EQ(b.size(), std::uint64_t{1} << atoms);
    for (std::uint64_t i = 0; i < b.size(); ++i)
      for (std::uint64_t j = 0; j < b.size(); ++j) {
        const auto x = b.element(i), y = b.element(j);
        EXPECT_EQ(b.complement(b.meet(x, y)), b.join(b.complement(x), b.complement(y)));
        EXPECT_EQ(b.meet(x, b.complement(x)), b.zero());
        EXPECT_EQ(b.join(x, b.complement(x)), b.one());
        for (std::uint64_t k = 0; k < b.size(); ++k) {
          const auto z = b.element(k);
          EXPECT_EQ(b.meet(x, b.join(y, z)), b.join(b.meet(x, y), b.meet(x, z)));
        }
      }
  }
  EXPECT_THROW(FiniteBooleanAlgebra(0), Error);
  EXPECT_THROW(FiniteBooleanAlgebra(3).element(8), Error);
}

TEST(Stone, OneAtom) { EXPECT_EQ(stone_spectrum(FiniteBooleanAlgebra(1)).size(), 1u); }

TEST(Stone, RepresentationIsIsomorphism) {
  for (int atoms = 1; atoms <= 4; ++atoms) {
    const FiniteBooleanAlgebra b(atoms);
    const auto spec = stone_spectrum(b);
    ASSERT_EQ(spec.size(), static_cast<std::size_t>(atoms));
    for (const auto& h : spec) {
      EXPECT_TRUE(h(b.one()));
      EXPECT_FALSE(h(b.zero()));
    }
    for (std::uint64_t i = 0; i < b.size(); ++i) {
      const auto x = b.element(i);
      EXPECT_EQ(stone_represent(spec, x), i);
      for (std::uint64_t j = 0; j < b.size(); ++j) {
        const auto y = b.element(j);
        for (const auto& h : spec) {
          EXPECT_EQ(h(b.meet(x, y)), h(x) && h(y));
          EXPECT_EQ(h(b.join(x, y)), h(x) || h(y));
          EXPECT_EQ(h(b.complement(x)), !h(x));
        }
      }
    }
  }
}

TEST(Measure, FiniteAdditivity) {
  const FiniteBooleanAlgebra b(4);
  const MeasureVector mu({1.0, 0.5, 2.0, 0.25});
  for (std::uint64_t i = 0; i < b.size(); ++i) {
    const auto x = b.element(i), y = b.complement(x);
    EXPECT_DOUBLE_EQ(mu(x) + mu(y), mu(b.one()));
  }
  EXPECT_EQ(mu(b.zero()), 0.0);
  EXPECT_THROW(MeasureVector({1.0, -1.0}), Error);
}

TEST(RnQuotient, Examples) {
  EXPECT_EQ(rn_quotient(MeasureVector({3, 1}), MeasureVector({1, 2})), (std::vector<double>{3.0, 0.5}));
  EXPECT_EQ(rn_quotient(MeasureVector({2, 5}), MeasureVector({2, 5})), (std::vector<double>{1.0, 1.0}));
  EXPECT_EQ(rn_quotient(MeasureVector({0, 1}), MeasureVector({0, 2})), (std::vector<double>{0.0, 0.5}));
  try {
    rn_quotient(MeasureVector({1, 1}), MeasureVector({0, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotAbsolutelyContinuous);
  }
}

TEST(RnQuotient, DensityReproducesMeasure) {
  Rng rng(81);
  const FiniteBooleanAlgebra b(5);
  const auto m1 = random_measure(5, rng), m2 = random_measure(5, rng);
  const auto f = rn_quotient(m2, m1);
  for (std::uint64_t i = 0; i < b.size(); ++i) {
    const auto x = b.element(i);
    double s = 0.0;
    for (int a = 0; a < 5; ++a)
      if (x.contains(a)) s += m1.weight(a) * f[static_cast<std::size_t>(a)];
    EXPECT_NEAR(s, m2(x), 1e-14 * std::max(1.0, m2(x)));
  }
}

TEST(RnQuotient, ChainRuleAndInversion) {
  Rng rng(82);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m1 = random_measure(5, rng), m2 = random_measure(5, rng), m3 = random_measure(5, rng);
    const auto f21 = rn_quotient(m2, m1), f32 = rn_quotient(m3, m2), f31 = rn_quotient(m3, m1), f12 = rn_quotient(m1, m2);
    for (std::size_t a = 0; a < 5; ++a) {
      EXPECT_NEAR(f32[a] * f21[a], f31[a], 1e-14 * f31[a]);
      EXPECT_NEAR(f12[a] * f21[a], 1.0, 1e-14);
    }
  }
}

TEST(LpB, Examples) {
  for (double p : {1.0, 2.0, 3.5}) EXPECT_NEAR(lp_b_norm({0, 1, 0}, p, MeasureVector({1, 2.5, 1})), std::pow(2.5, 1 / p), 1e-15);
  EXPECT_NEAR(lp_b_norm({1, 1}, 2.0, MeasureVector({1, 1})), std::sqrt(2.0), 1e-15);
  EXPECT_EQ(lp_b_norm({5, -2}, kInf, MeasureVector({0, 1})), 2.0);
  EXPECT_THROW(lp_b_norm({1, 1}, 0.9, MeasureVector({1, 1})), Error);
}

TEST(LpB, MatchesNoncommutativeNormOfEmbedding) {
  Rng rng(83);
  for (int trial = 0; trial < 50; ++trial) {
    const int atoms = 1 + trial % 6;
    const FiniteBooleanAlgebra b(atoms);
    const auto emb = embed_diagonal(b);
    const auto mu = random_measure(atoms, rng);
    const auto f = random_function(atoms, rng);
    for (double p : {1.0, 1.5, 2.0, 3.0, kInf})
      EXPECT_NEAR(lp_b_norm(f, p, mu), lp_norm(emb.function(f), p, emb.trace(mu)), 1e-12);
  }
}

TEST(LpB, DisjointSupportsAddPowers) {
  const MeasureVector mu({1.0, 2.0, 0.5, 3.0});
  const std::vector<double> f{1.5, 0, -2.0, 0}, g{0, 0.7, 0, 1.1};
  std::vector<double> s(4);
  for (std::size_t i = 0; i < 4; ++i) s[i] = f[i] + g[i];
  for (double p : {1.0, 2.0, 3.0})
    EXPECT_NEAR(std::pow(lp_b_norm(s, p, mu), p), std::pow(lp_b_norm(f, p, mu), p) + std::pow(lp_b_norm(g, p, mu), p),
                1e-13);
}

TEST(Canonical, Examples) {
  const CanonicalLpElement x({1.0, -2.0, 0.5}, MeasureVector({1, 2, 3}), 0.5);
  const CanonicalLpElement zero({0, 0, 0}, MeasureVector({4, 1, 1}), 0.5);
  EXPECT_TRUE(canonical::add(x, zero).equivalent(x));
  const auto s = canonical::scale(x, 3.0);
  EXPECT_NEAR(s.norm(), 3.0 * x.norm(), 1e-14);
  EXPECT_EQ(s.function(), (std::vector<double>{3.0, -6.0, 1.5}));
  EXPECT_THROW(CanonicalLpElement({1.0}, MeasureVector({0.0}), 1.0), Error);
  EXPECT_THROW(CanonicalLpElement({1.0}, MeasureVector({1.0}), 0.0), Error);
}

TEST(Canonical, ReReferencingPreservesClass) {
  Rng rng(84);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = CanonicalLpElement(random_function(4, rng), random_measure(4, rng), rng.uniform(0.1, 1.0));
    const auto nu = random_measure(4, rng);
    const auto y = x.rereferenced(nu);
    EXPECT_TRUE(y.equivalent(x));
    EXPECT_NEAR(y.norm(), x.norm(), 1e-13 * std::max(1.0, x.norm()));
    for (std::size_t a = 0; a < 4; ++a)
      EXPECT_NEAR(x.function()[a], y.function()[a] * std::pow(nu.weight(static_cast<int>(a)) / x.measure().weight(static_cast<int>(a)), x.gamma()),
                  1e-12 * std::max(1.0, std::abs(x.function()[a])));
  }
}

TEST(Canonical, OperationsAreReferenceIndependent) {
  Rng rng(85);
  for (int trial = 0; trial < 50; ++trial) {
    const double g = rng.uniform(0.2, 1.0);
    const auto x = CanonicalLpElement(random_function(5, rng), random_measure(5, rng), g);
    const auto y = CanonicalLpElement(random_function(5, rng), random_measure(5, rng), g);
    const auto r = random_measure(5, rng);
    EXPECT_TRUE(canonical::add(x, y).equivalent(canonical::add(x, y, r)));
    EXPECT_TRUE(canonical::meet(x, y).equivalent(canonical::meet(x, y, r)));
    EXPECT_TRUE(canonical::join(x, y).equivalent(canonical::join(x, y, r)));
    EXPECT_NEAR(canonical::add(x, y).norm(), canonical::add(x, y, r).norm(), 1e-12 * std::max(1.0, x.norm() + y.norm()));
  }
}

TEST(Canonical, ExponentMismatch) {
  const CanonicalLpElement x({1.0}, MeasureVector({1.0}), 0.5), y({1.0}, MeasureVector({1.0}), 1.0);
  for (auto op : {+[](const CanonicalLpElement& a, const CanonicalLpElement& b) { canonical::add(a, b); },
                  +[](const CanonicalLpElement& a, const CanonicalLpElement& b) { canonical::multiply(a, b); },
                  +[](const CanonicalLpElement& a, const CanonicalLpElement&) { canonical_integral(a); }}) {
    try {
      op(x, y);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::ExponentMismatch);
    }
  }
}

TEST(CanonicalIntegral, Examples) {
  EXPECT_DOUBLE_EQ(canonical_integral(CanonicalLpElement({1, 1, 1}, MeasureVector({1, 1, 1}), 1.0)), 3.0);
  const CanonicalLpElement x({2.0, -1.0, 4.0}, MeasureVector({0.5, 1.0, 2.0}), 1.0);
  const auto doubled = x.rereferenced(MeasureVector({1.0, 2.0, 4.0}));
  EXPECT_EQ(doubled.function(), (std::vector<double>{1.0, -0.5, 2.0}));
  EXPECT_EQ(canonical_integral(doubled), canonical_integral(x));
}

TEST(CanonicalIntegral, PairingOfConjugateExponents) {
  Rng rng(86);
  for (int trial = 0; trial < 20; ++trial) {
    const double g = rng.uniform(0.1, 0.9);
    const auto mu = random_measure(4, rng);
    const auto f = random_function(4, rng), h = random_function(4, rng);
    const CanonicalLpElement x(f, mu, g), y(h, mu, 1.0 - g);
    double ref = 0.0;
    for (int a = 0; a < 4; ++a) ref += mu.weight(a) * f[static_cast<std::size_t>(a)] * h[static_cast<std::size_t>(a)];
    const auto prod = canonical::multiply(x.rereferenced(random_measure(4, rng)), y);
    EXPECT_NEAR(canonical_integral(prod), ref, 1e-13 * std::max(1.0, std::abs(ref)));
    // Hölder: |∫xy| ≤ ‖x‖ ‖y‖.
    EXPECT_LE(std::abs(ref), x.norm() * y.norm() + 1e-13);
  }
}

TEST(Canonical, PositiveL1ClassesAreFiniteMeasures) {
  Rng rng(87);
  const FiniteBooleanAlgebra b(4);
  const auto emb = embed_diagonal(b);
  const auto mu = random_measure(4, rng);
  const CanonicalLpElement one({1, 1, 1, 1}, mu, 1.0);
  const auto ref = random_measure(4, rng);
  const auto x = one.rereferenced(ref);
  std::vector<double> w(4);
  for (int a = 0; a < 4; ++a) w[static_cast<std::size_t>(a)] = x.function()[static_cast<std::size_t>(a)] * ref.weight(a);
  for (std::size_t a = 0; a < 4; ++a) EXPECT_NEAR(w[a], mu.weights()[a], 1e-14);
  const auto st = emb.state(MeasureVector(w));
  EXPECT_TRUE(st.is_faithful());
  for (std::size_t a = 0; a < 4; ++a) EXPECT_NEAR(emb.measure(st).weights()[a], mu.weights()[a], 1e-14);
}

TEST(Embedding, SingleAtomIsTrivial) {
  const auto emb = embed_diagonal(FiniteBooleanAlgebra(1));
  EXPECT_EQ(emb.algebra().linear_dim(), 1);
  EXPECT_NEAR(operator_norm(emb.projection(FiniteBooleanAlgebra(1).one()) - AlgebraElement::identity(emb.algebra())), 0.0,
              0.0);
}

TEST(Embedding, CocycleOfTwoAtoms) {
  const auto emb = embed_diagonal(FiniteBooleanAlgebra(2));
  const auto u = connes_cocycle(emb.state(MeasureVector({3, 1})), emb.state(MeasureVector({1, 1})), 1.0);
  EXPECT_LT(std::abs(u.block(0)(0, 0) - std::pow(3.0, kI)), 1e-14);
  EXPECT_LT(std::abs(u.block(1)(0, 0) - 1.0), 1e-14);
}

TEST(Embedding, ProjectionsFormTheLattice) {
  const FiniteBooleanAlgebra b(3);
  const auto emb = embed_diagonal(b);
  for (std::uint64_t i = 0; i < b.size(); ++i)
    for (std::uint64_t j = 0; j < b.size(); ++j) {
      const auto x = b.element(i), y = b.element(j);
      EXPECT_EQ(operator_norm(emb.projection(b.meet(x, y)) - emb.projection(x) * emb.projection(y)), 0.0);
    }
}

TEST(Embedding, CocycleAndPedersenTakesakiMatchRadonNikodym) {
  Rng rng(88);
  for (int trial = 0; trial < 50; ++trial) {
    const int atoms = 1 + trial % 6;
    const auto emb = embed_diagonal(FiniteBooleanAlgebra(atoms));
    const auto mpsi = random_measure(atoms, rng), mphi = random_measure(atoms, rng);
    const auto psi = emb.state(mpsi), phi = emb.state(mphi);
    const auto f = rn_quotient(mpsi, mphi);
    for (double t : {-1.5, 0.3, 2.0}) {
      const auto u = connes_cocycle(psi, phi, t);
      for (int a = 0; a < atoms; ++a)
        EXPECT_LT(std::abs(u.block(static_cast<std::size_t>(a))(0, 0) - std::pow(f[static_cast<std::size_t>(a)], kI * t)), 1e-12);
    }
    const auto h = pedersen_takesaki(psi, phi);
    ASSERT_TRUE(std::holds_alternative<AlgebraElement>(h));
    for (int a = 0; a < atoms; ++a)
      EXPECT_NEAR(std::get<AlgebraElement>(h).block(static_cast<std::size_t>(a))(0, 0).real(), f[static_cast<std::size_t>(a)],
                  1e-13 * std::max(1.0, f[static_cast<std::size_t>(a)]));
  }
}
