#include "spectral_dd/error.hpp"
#include "spectral_dd/krylov.hpp"
#include "spectral_dd/pipeline.hpp"
#include "spectral_dd/schwarz.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace sdd;

namespace {

struct Instance {
  StructuredGrid grid;
  std::vector<SubdomainPatch> patches;
  CoefficientField field;
  GlobalSystem system;
};

Instance make_instance(int nc, int r, double contrast, std::uint64_t seed) {
  StructuredGrid g(nc, r);
  auto patches = subdomain_patches(g);
  auto f = contrast == 1.0 ? test::constant_field(g, 1.0) : test::random_binary_field(g, contrast, 0.3, seed);
  auto sys = assemble_global(g, f);
  return {g, std::move(patches), std::move(f), std::move(sys)};
}

// Reference action built from dense inverses of every block.
Vector reference_apply(const Instance& in, const SpectralCoarseSpace& cs, const Vector& r) {
  const DenseMatrix A = test::dense(in.system.A);
  Vector z = Vector::Zero(r.size());
  if (cs.dimension() > 0) {
    const DenseMatrix R0 = test::dense(cs.R0);
    const DenseMatrix A0 = R0 * A * R0.transpose();
    z += R0.transpose() * A0.inverse() * (R0 * r);
  }
  for (const auto& p : in.patches) {
    std::vector<int> dofs;
    for (int n : p.interior_nodes) dofs.push_back(in.grid.dof(n));
    if (dofs.empty()) continue;
    DenseMatrix Aj(dofs.size(), dofs.size());
    Vector rj(dofs.size());
    for (std::size_t a = 0; a < dofs.size(); ++a) {
      rj[a] = r[dofs[a]];
      for (std::size_t b = 0; b < dofs.size(); ++b) Aj(a, b) = A(dofs[a], dofs[b]);
    }
    const Vector zj = Aj.inverse() * rj;
    for (std::size_t a = 0; a < dofs.size(); ++a) z[dofs[a]] += zj[a];
  }
  return z;
}

}  // namespace

TEST_SUITE("schwarz") {
  TEST_CASE("apply matches dense block inverses") {
    const auto in = make_instance(3, 3, 1e3, 5);
    const auto cs = build_coarse(in.grid, in.patches, in.field, CoarseVariant::spectral_standard_pou, {});
    const TwoLevelPreconditioner P(in.system.A, in.grid, in.patches, cs);
    std::mt19937_64 rng(2);
    for (int t = 0; t < 3; ++t) {
      const Vector r = test::random_vector(in.grid.dof_count(), rng);
      const Vector ref = reference_apply(in, cs, r);
      CHECK((P.apply(r) - ref).norm() <= 1e-8 * ref.norm());
    }
  }

  TEST_CASE("legacy standard coarse operator has one row per interior coarse node") {
    const auto in = make_instance(8, 2, 1e2, 1);
    const auto cs = build_coarse(in.grid, in.patches, in.field, CoarseVariant::standard, {});
    const TwoLevelPreconditioner P(in.system.A, in.grid, in.patches, cs);
    CHECK(P.coarse_dimension() == 49);
    CHECK(P.coarse_matrix().rows() == 49);
    CHECK(P.coarse_matrix().cols() == 49);
  }

  TEST_CASE("one-level method without a coarse space") {
    const auto in = make_instance(4, 3, 1.0, 1);
    const TwoLevelPreconditioner P(in.system.A, in.grid, in.patches, empty_coarse(in.grid));
    CHECK(P.coarse_dimension() == 0);
    std::mt19937_64 rng(9);
    const Vector r = test::random_vector(in.grid.dof_count(), rng);
    CHECK((P.apply(r) - reference_apply(in, empty_coarse(in.grid), r)).norm() <= 1e-10 * r.norm());
  }

  TEST_CASE("ablation flags switch parts off") {
    const auto in = make_instance(4, 2, 1e2, 3);
    const auto cs = build_coarse(in.grid, in.patches, in.field, CoarseVariant::standard, {});
    const TwoLevelPreconditioner both(in.system.A, in.grid, in.patches, cs);
    const TwoLevelPreconditioner coarse_only(in.system.A, in.grid, in.patches, cs, {true, false});
    const TwoLevelPreconditioner local_only(in.system.A, in.grid, in.patches, cs, {false, true});
    std::mt19937_64 rng(4);
    const Vector r = test::random_vector(in.grid.dof_count(), rng);
    CHECK((both.apply(r) - coarse_only.apply(r) - local_only.apply(r)).norm() <= 1e-12 * both.apply(r).norm());
  }

  TEST_CASE("zero residual maps to zero") {
    const auto in = make_instance(3, 2, 1e4, 8);
    const auto cs = build_coarse(in.grid, in.patches, in.field, CoarseVariant::spectral_multiscale_pou, {});
    const TwoLevelPreconditioner P(in.system.A, in.grid, in.patches, cs);
    CHECK(P.apply(Vector::Zero(in.grid.dof_count())).norm() == 0.0);
  }

  TEST_CASE("preconditioner is symmetric and positive") {
    const auto in = make_instance(4, 3, 1e5, 10);
    for (auto v : {CoarseVariant::spectral_standard_pou, CoarseVariant::spectral_multiscale_pou,
                   CoarseVariant::standard, CoarseVariant::none}) {
      const auto cs = build_coarse(in.grid, in.patches, in.field, v, {});
      const TwoLevelPreconditioner P(in.system.A, in.grid, in.patches, cs);
      std::mt19937_64 rng(11);
      for (int t = 0; t < 5; ++t) {
        const Vector r = test::random_vector(in.grid.dof_count(), rng);
        const Vector s = test::random_vector(in.grid.dof_count(), rng);
        const double a = s.dot(P.apply(r)), b = r.dot(P.apply(s));
        CHECK(std::abs(a - b) <= 1e-12 * std::max(std::abs(a), 1.0) * 1e2);
        CHECK(r.dot(P.apply(r)) > 0.0);
      }
    }
  }

  TEST_CASE("duplicated coarse vector is reported with its pivot") {
    const auto in = make_instance(3, 2, 1.0, 1);
    auto cs = build_coarse(in.grid, in.patches, in.field, CoarseVariant::standard, {});
    REQUIRE(cs.dimension() == 4);
    DenseMatrix R = test::dense(cs.R0);
    DenseMatrix dup(5, R.cols());
    dup.topRows(4) = R;
    dup.row(4) = R.row(2);
    cs.R0 = dup.sparseView();
    try {
      TwoLevelPreconditioner P(in.system.A, in.grid, in.patches, cs);
      FAIL("singular coarse operator was accepted");
    } catch (const SingularMatrix& e) {
      CHECK(e.pivot() == 4);
    }
  }

  TEST_CASE("dense Cholesky reports the failing pivot") {
    DenseMatrix a(3, 3);
    a << 4, 2, 0, 2, 1, 0, 0, 0, 3;
    try {
      DenseCholesky c(a);
      FAIL("indefinite matrix factored");
    } catch (const SingularMatrix& e) {
      CHECK(e.pivot() == 1);
    }
    DenseMatrix spd(2, 2);
    spd << 4, 1, 1, 3;
    const DenseCholesky c(spd);
    const Vector x = c.solve(Vector::Ones(2));
    CHECK((spd * x - Vector::Ones(2)).norm() <= 1e-14);
  }

  TEST_CASE("size checks") {
    const auto in = make_instance(3, 2, 1.0, 1);
    const TwoLevelPreconditioner P(in.system.A, in.grid, in.patches, empty_coarse(in.grid));
    CHECK_THROWS_AS(P.apply(Vector::Zero(3)), DimensionMismatch);
    const StructuredGrid other(2, 2);
    CHECK_THROWS_AS(TwoLevelPreconditioner(in.system.A, other, subdomain_patches(other), empty_coarse(other)),
                    DimensionMismatch);
  }
}
