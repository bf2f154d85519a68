#include "fssqm/fock.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace fssqm {

Complex root_of_unity(int lambda, long k) {
    const long r = ((k % lambda) + lambda) % lambda;
    const double arg = 2.0 * std::numbers::pi * static_cast<double>(r) / lambda;
    return {std::cos(arg), std::sin(arg)};
}

std::vector<double> eval_structure_function(const StructureFunctionSpec& spec, int n_max) {
    if (n_max < 0) throw std::invalid_argument("eval_structure_function: n_max < 0");
    std::vector<double> F(static_cast<std::size_t>(n_max) + 1, 0.0);

    switch (spec.kind) {
        case StructureKind::Oscillator:
            for (int n = 0; n <= n_max; ++n) F[n] = static_cast<double>(n);
            break;
        case StructureKind::CLambdaExtended: {
            if (spec.lambda < 2)
                throw validation_error("structure function: lambda must be >= 2");
            if (static_cast<int>(spec.alpha.size()) != spec.lambda)
                throw validation_error("structure function: alpha must have lambda entries");
            double sum = 0.0;
            for (double a : spec.alpha) sum += a;
            if (std::abs(sum) > 1e-12)
                throw validation_error(
                    "structure function: alpha values must sum to zero, got " +
                    std::to_string(sum));
            for (int n = 0; n < n_max; ++n)
                F[n + 1] = F[n] + 1.0 + spec.alpha[n % spec.lambda];
            break;
        }
        case StructureKind::Table:
            if (static_cast<int>(spec.values.size()) < n_max + 1)
                throw validation_error(
                    "structure function: table must supply F(0.." +
                    std::to_string(n_max) + "), got " +
                    std::to_string(spec.values.size()) + " values");
            for (int n = 0; n <= n_max; ++n) F[n] = spec.values[n];
            break;
    }

    if (F[0] != 0.0)
        throw validation_error("structure function: F(0) must be 0, got " +
                               std::to_string(F[0]));
    for (int n = 1; n <= n_max; ++n) {
        if (!std::isfinite(F[n]))
            throw validation_error("structure function: F(" + std::to_string(n) +
                                   ") is not finite");
        if (F[n] <= 0.0)
            throw validation_error("structure function: F(" + std::to_string(n) +
                                   ") = " + std::to_string(F[n]) + " violates F(n) > 0");
    }
    return F;
}

FockRep build_fock_rep(const StructureFunctionSpec& spec, int lambda, int dim) {
    if (lambda < 2) throw validation_error("build_fock_rep: lambda must be >= 2");
    if (dim < 4 * lambda)
        throw validation_error("build_fock_rep: dim must be >= 4*lambda = " +
                               std::to_string(4 * lambda));

    FockRep rep;
    rep.dim = dim;
    rep.lambda = lambda;
    rep.safe_dim = dim - 2 * lambda;
    rep.F = eval_structure_function(spec, dim);

    const std::size_t d = static_cast<std::size_t>(dim);
    rep.N_op = CMatrix(d, d);
    rep.a_op = CMatrix(d, d);
    rep.T_op = CMatrix(d, d);
    for (int n = 0; n < dim; ++n) {
        rep.N_op(n, n) = static_cast<double>(n);
        rep.T_op(n, n) = root_of_unity(lambda, n);
        if (n >= 1) rep.a_op(n - 1, n) = std::sqrt(rep.F[n]);
    }
    rep.adag_op = adjoint(rep.a_op);
    rep.projectors = build_projectors(rep);
    return rep;
}

std::vector<CMatrix> build_projectors(const FockRep& rep) {
    const int lam = rep.lambda;
    std::vector<CMatrix> P;
    P.reserve(lam);
    // Powers of T once, reused for every mu.
    std::vector<CMatrix> Tpow(lam);
    Tpow[0] = CMatrix::identity(rep.dim);
    for (int nu = 1; nu < lam; ++nu) Tpow[nu] = matmul(Tpow[nu - 1], rep.T_op);
    for (int mu = 0; mu < lam; ++mu) {
        CMatrix sum(rep.dim, rep.dim);
        for (int nu = 0; nu < lam; ++nu)
            sum += root_of_unity(lam, -static_cast<long>(mu) * nu) * Tpow[nu];
        P.push_back((1.0 / lam) * sum);
    }
    return P;
}

CMatrix safe_corner(const FockRep& rep, const CMatrix& op) {
    return block(op, 0, 0, rep.safe_dim, rep.safe_dim);
}

GradingReport check_grading_relations(const FockRep& rep, double tol) {
    const Complex q = root_of_unity(rep.lambda, 1);
    const Complex qinv = root_of_unity(rep.lambda, -1);
    const auto res = [&](const CMatrix& lhs, const CMatrix& rhs) {
        return scaled_residual(safe_corner(rep, lhs), safe_corner(rep, rhs));
    };
    const CMatrix zero(rep.dim, rep.dim);

    GradingReport r{};
    r.number_grading = res(q_commutator(rep.N_op, rep.T_op, 1.0), zero);
    r.raise_grading = res(matmul(rep.adag_op, rep.T_op), qinv * matmul(rep.T_op, rep.adag_op));
    r.lower_grading = res(matmul(rep.a_op, rep.T_op), q * matmul(rep.T_op, rep.a_op));

    r.number_projector = r.raise_projector = r.lower_projector = 0.0;
    const int lam = rep.lambda;
    for (int mu = 0; mu < lam; ++mu) {
        const CMatrix& P = rep.projectors[mu];
        const CMatrix& Pup = rep.projectors[(mu + 1) % lam];
        const CMatrix& Pdn = rep.projectors[(mu - 1 + lam) % lam];
        r.number_projector = std::max(r.number_projector,
                                      res(q_commutator(rep.N_op, P, 1.0), zero));
        r.raise_projector = std::max(r.raise_projector,
                                     res(matmul(rep.adag_op, P), matmul(Pup, rep.adag_op)));
        r.lower_projector = std::max(r.lower_projector,
                                     res(matmul(rep.a_op, P), matmul(Pdn, rep.a_op)));
    }
    r.max_residual = std::max({r.number_grading, r.raise_grading, r.lower_grading,
                               r.number_projector, r.raise_projector, r.lower_projector});
    r.tolerance = tol;
    r.passed = r.max_residual <= tol;
    return r;
}

}  // namespace fssqm
