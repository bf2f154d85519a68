#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fssqm/fock.hpp"

using namespace fssqm;

namespace {

StructureFunctionSpec oscillator() { return {StructureKind::Oscillator, 0, {}, {}}; }

StructureFunctionSpec c_ext(int lambda, std::vector<double> alpha) {
    return {StructureKind::CLambdaExtended, lambda, std::move(alpha), {}};
}

double fock_residual(const FockRep& rep, const CMatrix& lhs, const CMatrix& rhs) {
    return scaled_residual(safe_corner(rep, lhs), safe_corner(rep, rhs));
}

}  // namespace

TEST_CASE("structure function: oscillator") {
    CHECK(eval_structure_function(oscillator(), 5) ==
          std::vector<double>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("structure function: extended oscillator recursion") {
    CHECK(eval_structure_function(c_ext(2, {1.0, -1.0}), 5) ==
          std::vector<double>{0, 2, 2, 4, 4, 6});
}

TEST_CASE("structure function: positivity violation reports the offending n") {
    CHECK_THROWS_WITH_AS(eval_structure_function(c_ext(2, {-2.0, 2.0}), 5),
                         doctest::Contains("F(1)"), validation_error);
}

TEST_CASE("structure function: alpha sum constraint") {
    CHECK_THROWS_WITH_AS(eval_structure_function(c_ext(3, {0.5, 0.0, 0.0}), 5),
                         doctest::Contains("sum to zero"), validation_error);
}

TEST_CASE("structure function: table kind") {
    StructureFunctionSpec t{StructureKind::Table, 0, {}, {0.0, 1.5, 2.0, 3.5}};
    CHECK(eval_structure_function(t, 3) == std::vector<double>{0.0, 1.5, 2.0, 3.5});
    CHECK_THROWS_AS(eval_structure_function(t, 9), validation_error);

    StructureFunctionSpec bad{StructureKind::Table, 0, {}, {0.0, 1.0, -0.5}};
    CHECK_THROWS_WITH_AS(eval_structure_function(bad, 2), doctest::Contains("F(2)"),
                         validation_error);
}

TEST_CASE("fock rep: ladder amplitudes and number operator") {
    const FockRep rep = build_fock_rep(oscillator(), 2, 8);
    CHECK(rep.safe_dim == 4);
    for (int n = 1; n < 8; ++n)
        CHECK(rep.a_op(n - 1, n).real() == doctest::Approx(std::sqrt(double(n))));
    for (int n = 0; n < 8; ++n) CHECK(rep.N_op(n, n) == Complex(double(n)));

    CHECK_THROWS_AS(build_fock_rep(oscillator(), 3, 11), validation_error);
    CHECK_THROWS_AS(build_fock_rep(oscillator(), 1, 8), validation_error);
}

TEST_CASE("fock rep: [a, a'] = G(N) on the safe block") {
    for (const auto& spec :
         {oscillator(), c_ext(3, {0.4, -0.3, -0.1}), c_ext(2, {0.5, -0.5})}) {
        const int lambda = spec.kind == StructureKind::Oscillator ? 3 : std::max(spec.lambda, 2);
        const FockRep rep = build_fock_rep(spec, lambda, 16);
        std::vector<Complex> g(rep.dim), f(rep.dim), fup(rep.dim);
        for (int n = 0; n < rep.dim; ++n) {
            g[n] = rep.F[n + 1] - rep.F[n];
            f[n] = rep.F[n];
            fup[n] = rep.F[n + 1];
        }
        CHECK(fock_residual(rep, q_commutator(rep.a_op, rep.adag_op, 1.0),
                            CMatrix::diagonal(g)) < 1e-12);
        CHECK(fock_residual(rep, matmul(rep.adag_op, rep.a_op), CMatrix::diagonal(f)) < 1e-12);
        CHECK(fock_residual(rep, matmul(rep.a_op, rep.adag_op), CMatrix::diagonal(fup)) < 1e-12);
    }
}

TEST_CASE("grading operator: eigenvalue structure") {
    const FockRep rep = build_fock_rep(oscillator(), 3, 12);
    // q^mu appears with the residue-class count.
    for (int mu = 0; mu < 3; ++mu) {
        int count = 0;
        for (int n = 0; n < 12; ++n)
            if (std::abs(rep.T_op(n, n) - root_of_unity(3, mu)) < 1e-14) ++count;
        CHECK(count == 4);
    }
    CHECK(scaled_residual(mat_power(rep.T_op, 3), CMatrix::identity(12)) < 1e-14);
    CHECK(scaled_residual(matmul(adjoint(rep.T_op), rep.T_op), CMatrix::identity(12)) < 1e-14);
}

TEST_CASE("projectors") {
    const FockRep rep = build_fock_rep(oscillator(), 3, 12);
    CMatrix sum(12, 12);
    for (int mu = 0; mu < 3; ++mu) {
        const CMatrix& P = rep.projectors[mu];
        sum += P;
        CHECK(scaled_residual(P, adjoint(P)) < 1e-14);
        for (int nu = 0; nu < 3; ++nu) {
            const CMatrix prod = matmul(P, rep.projectors[nu]);
            if (mu == nu)
                CHECK(scaled_residual(prod, P) < 1e-14);
            else
                CHECK(inf_norm(prod) < 1e-14);
        }
    }
    CHECK(scaled_residual(sum, CMatrix::identity(12)) < 1e-14);

    SUBCASE("residue selection, lambda = 3, dim = 6") {
        const FockRep small = build_fock_rep(oscillator(), 3, 12);
        for (int n = 0; n < 6; ++n) {
            const double expected = (n % 3 == 1) ? 1.0 : 0.0;
            CHECK(std::abs(small.projectors[1](n, n) - expected) < 1e-14);
        }
    }
}

TEST_CASE("grading relations hold at machine precision") {
    const FockRep osc3 = build_fock_rep(oscillator(), 3, 16);
    const GradingReport r1 = check_grading_relations(osc3, 1e-12);
    CHECK(r1.passed);
    CHECK(r1.max_residual <= 1e-12);
    CHECK(r1.number_grading == 0.0);  // both diagonal

    const FockRep cext4 = build_fock_rep(c_ext(4, {0.3, -0.1, -0.1, -0.1}), 4, 20);
    const GradingReport r2 = check_grading_relations(cext4, 1e-12);
    CHECK(r2.passed);
    CHECK(r2.max_residual <= 1e-12);
}

TEST_CASE("random extended specs keep every invariant") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> dist(-0.4, 0.4);
    for (int trial = 0; trial < 6; ++trial) {
        const int lambda = 2 + trial % 5;
        std::vector<double> alpha(lambda);
        double sum = 0.0;
        for (int i = 0; i + 1 < lambda; ++i) {
            alpha[i] = dist(rng);
            sum += alpha[i];
        }
        alpha[lambda - 1] = -sum;
        const FockRep rep = build_fock_rep(c_ext(lambda, alpha), lambda, 4 * lambda + 6);
        CHECK(check_grading_relations(rep, 1e-12).passed);
        std::vector<Complex> g(rep.dim);
        for (int n = 0; n < rep.dim; ++n) g[n] = rep.F[n + 1] - rep.F[n];
        const double res = fock_residual(rep, q_commutator(rep.a_op, rep.adag_op, 1.0),
                                         CMatrix::diagonal(g));
        CHECK(res < 1e-12);
    }
}
