#include <cmath>

#include "adasample/errors.hpp"
#include "adasample/oracle.hpp"
#include "adasample/rng.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace adasample;
using namespace testutil;

namespace {

// Four quadratic centers whose statistics at x = (1, 0) are exact in doubles:
// gradient (1, 0), inner-product variance 1/2, orthogonal variance 2.
struct QuadFixture {
  RowMatrix centers = make_centers();
  ObjectiveSpec spec = ObjectiveSpec::mean_square(centers);
  Dataset data = dataset_from_centers(centers);
  Vector x = make_x();

  static RowMatrix make_centers() {
    RowMatrix c(4, 2);
    c << -1.0, -2.0, 1.0, 2.0, 0.0, 0.0, 0.0, 0.0;
    return c;
  }
  static Vector make_x() {
    Vector v(2);
    v << 1.0, 0.0;
    return v;
  }
};

}  // namespace

TEST_CASE("minimal exact sample sizes on the quadratic fixture") {
  const QuadFixture f;
  const BetaReport rep = beta_and_min_sizes(f.spec, f.data, f.x, 0.9);
  CHECK(rep.beta == 0.2);  // (1/2) / (5/2), exact in doubles
  CHECK(rep.s_min_inner == doctest::Approx(0.61728395061728392).epsilon(1e-15));
  CHECK(rep.s_min_norm == doctest::Approx(3.0864197530864197).epsilon(1e-15));
  CHECK(rep.s_min_inner / rep.s_min_norm == doctest::Approx(rep.beta).epsilon(1e-15));
}

TEST_CASE("exact test pass pattern on the quadratic fixture") {
  const QuadFixture f;
  const ExactTestReport at1 = exact_tests(f.spec, f.data, f.x, 0.9, 5.84, 1);
  CHECK(at1.ip_pass);      // 0.5 <= 0.81
  CHECK(at1.orth_pass);    // 2.0 <= 34.1056
  CHECK(!at1.norm_pass);   // 2.5 > 0.81
  CHECK(at1.ip_lhs == 0.5);
  CHECK(at1.orth_lhs == 2.0);
  CHECK(at1.norm_lhs == 2.5);
  CHECK(at1.ip_rhs == at1.norm_rhs);  // ||p||^2 = 1 makes the sides coincide

  const ExactTestReport at4 = exact_tests(f.spec, f.data, f.x, 0.9, 5.84, 4);
  CHECK(at4.norm_pass);  // 2.5 / 4 = 0.625 <= 0.81
  CHECK(at4.ip_lhs == 0.125);

  CHECK_THROWS_AS(exact_tests(f.spec, f.data, f.x, 0.9, 5.84, 0), ConfigError);
  CHECK_THROWS_AS(exact_tests(f.spec, f.data, f.x, 0.9, 5.84, 5), ConfigError);
}

TEST_CASE("beta never exceeds one") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Dataset data = random_logistic_data(120, 6, seed);
    const ObjectiveSpec spec = ObjectiveSpec::logistic(0.01);
    const Vector x = random_vector(6, seed + 1000);
    const BetaReport rep = beta_and_min_sizes(spec, data, x, 0.9);
    CHECK(rep.beta <= 1.0 + 1e-12);
    CHECK(rep.beta > 0.0);
    CHECK(rep.s_min_inner >= 0.0);
    CHECK(rep.s_min_norm >= rep.s_min_inner * (1.0 - 1e-12));
  }
  const QuadFixture f;
  CHECK_THROWS_AS(beta_and_min_sizes(f.spec, f.data, f.x, 0.0), ConfigError);
}

TEST_CASE("beta convention at zero gradient variance") {
  RowMatrix centers(3, 2);
  centers << 4.0, -1.0, 4.0, -1.0, 4.0, -1.0;  // identical rows: no variance
  const ObjectiveSpec spec = ObjectiveSpec::mean_square(centers);
  const Dataset data = dataset_from_centers(centers);
  Vector x(2);
  x << 0.0, 0.0;
  const BetaReport rep = beta_and_min_sizes(spec, data, x, 0.9);
  CHECK(rep.beta == 1.0);
  CHECK(rep.s_min_inner == 0.0);
  CHECK(rep.s_min_norm == 0.0);
}

TEST_CASE("descent probability sanity") {
  const QuadFixture f;
  RngStream rng(31);
  const double at_full = descent_probability(f.spec, f.data, f.x, 4, 2000, rng);
  CHECK(at_full == 1.0);  // the full batch is the true gradient

  const double at_one = descent_probability(f.spec, f.data, f.x, 1, 4000, rng);
  // Three of the four per-sample gradients have positive first component.
  CHECK(at_one == doctest::Approx(0.75).epsilon(0.03));

  CHECK_THROWS_AS(descent_probability(f.spec, f.data, f.x, 1, 999, rng), ConfigError);
  CHECK_THROWS_AS(descent_probability(f.spec, f.data, f.x, 0, 2000, rng), ConfigError);
  CHECK_THROWS_AS(descent_probability(f.spec, f.data, f.x, 5, 2000, rng), ConfigError);

  Vector stationary(2);
  stationary << 0.0, 0.0;  // gradient x - mean(c_i) = 0
  CHECK_THROWS_AS(descent_probability(f.spec, f.data, stationary, 2, 2000, rng),
                  ConfigError);
}

TEST_CASE("descent probability is reproducible from equal stream states") {
  const QuadFixture f;
  RngStream a(77), b(77);
  const double pa = descent_probability(f.spec, f.data, f.x, 2, 3000, a);
  const double pb = descent_probability(f.spec, f.data, f.x, 2, 3000, b);
  CHECK(pa == pb);
  // The call advances the stream, so a rerun draws fresh batches.
  const double pc = descent_probability(f.spec, f.data, f.x, 1, 3000, a);
  const double pd = descent_probability(f.spec, f.data, f.x, 1, 3000, b);
  CHECK(pc == pd);
}

TEST_CASE("reference optimum of the quadratic is the center mean") {
  const RowMatrix centers = random_centers(40, 5, 8);
  const ObjectiveSpec spec = ObjectiveSpec::mean_square(centers);
  const Dataset data = dataset_from_centers(centers);
  const ReferenceOptimum ref = reference_optimum(spec, data, 1e-12);

  const Vector cbar = centers.colwise().mean().transpose();
  CHECK((ref.x_star - cbar).lpNorm<Eigen::Infinity>() <= 1e-10);

  double analytic = 0.0;  // (1/2) mean ||c_i - cbar||^2
  for (Index i = 0; i < 40; ++i)
    analytic += 0.5 * (centers.row(i).transpose() - cbar).squaredNorm();
  analytic /= 40.0;
  CHECK(rel_diff(ref.r_star, analytic) <= 1e-10);
  CHECK(ref.iterations >= 1);
}

TEST_CASE("reference optimum of a logistic objective") {
  const Dataset data = random_logistic_data(150, 4, 9);
  const ObjectiveSpec spec = ObjectiveSpec::logistic(0.05);
  const ReferenceOptimum ref = reference_optimum(spec, data, 1e-9);
  CHECK(full_gradient(spec, data, ref.x_star).lpNorm<Eigen::Infinity>() <= 1e-9);
  CHECK(ref.r_star == full_value(spec, data, ref.x_star));
  CHECK(ref.r_star <= full_value(spec, data, random_vector(4, 10)));
  CHECK(ref.r_star <= full_value(spec, data, Vector::Zero(4)));
  CHECK_THROWS_AS(reference_optimum(spec, data, 0.0), ConfigError);
}

TEST_CASE("rate bound and angle bound constants") {
  CHECK(theoretical_rate(0.9, 5.84, 1.0, 1.0) ==
        doctest::Approx(0.97215694572831857).epsilon(1e-16));
  CHECK(theoretical_rate(0.0, 0.0, 1.0, 1.0) == 0.0);
  CHECK(theoretical_rate(0.5, 1.0, 0.5, 2.0) ==
        doctest::Approx(1.0 - 0.25 / 2.25).epsilon(1e-15));
  CHECK_THROWS_AS(theoretical_rate(0.9, 5.84, 0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(theoretical_rate(0.9, 5.84, 2.0, 1.0), ConfigError);
  CHECK_THROWS_AS(theoretical_rate(-0.1, 5.84, 1.0, 1.0), ConfigError);

  CHECK(tan_bound(0.9, 5.84) == doctest::Approx(13.397878858040809).epsilon(1e-15));
  CHECK(tan_bound(0.0, 2.0) == 2.0);
  CHECK_THROWS_AS(tan_bound(1.0, 5.84), ConfigError);
  CHECK_THROWS_AS(tan_bound(0.9, -1.0), ConfigError);
}

TEST_CASE("angles in degrees") {
  Vector e1(2), e2(2), diag(2), neg(2);
  e1 << 1.0, 0.0;
  e2 << 0.0, 3.0;
  diag << 2.0, 2.0;
  neg << -5.0, 0.0;
  CHECK(angle_degrees(e1, e2) == doctest::Approx(90.0).epsilon(1e-12));
  CHECK(angle_degrees(e1, diag) == doctest::Approx(45.0).epsilon(1e-12));
  CHECK(angle_degrees(e1, neg) == doctest::Approx(180.0).epsilon(1e-12));
  CHECK(angle_degrees(e1, e1) == doctest::Approx(0.0).epsilon(1e-12));
  // sqrt rounding in the norm product leaves a ~1e-6 degree residue even for
  // exactly parallel inputs
  CHECK(angle_degrees(diag, 4.0 * diag) <= 1e-5);
  CHECK_THROWS_AS(angle_degrees(e1, Vector::Zero(2)), ConfigError);
  CHECK_THROWS_AS(angle_degrees(Vector::Zero(2), e1), ConfigError);
}

TEST_CASE("exact tests agree with population statistics") {
  const Dataset data = random_logistic_data(90, 5, 11);
  const ObjectiveSpec spec = ObjectiveSpec::logistic(0.02);
  const Vector x = random_vector(5, 12);
  const Vector g = full_gradient(spec, data, x);
  const BatchStats pop = population_stats(spec, data, x, g);

  const ExactTestReport rep = exact_tests(spec, data, x, 0.7, 3.0, 9);
  CHECK(rep.ip_lhs == pop.var_inner / 9.0);
  CHECK(rep.orth_lhs == pop.var_orth / 9.0);
  CHECK(rep.norm_lhs == pop.var_grad / 9.0);
  const double pnsq = pop.pivot_norm_sq;
  const double th2 = 0.7 * 0.7;
  CHECK(rep.ip_rhs == th2 * pnsq * pnsq);
  CHECK(rep.orth_rhs == 3.0 * 3.0 * pnsq);
  CHECK(rep.norm_rhs == th2 * pnsq);
  CHECK(rep.ip_pass == (rep.ip_lhs <= rep.ip_rhs));
  CHECK(rep.orth_pass == (rep.orth_lhs <= rep.orth_rhs));
  CHECK(rep.norm_pass == (rep.norm_lhs <= rep.norm_rhs));
}
