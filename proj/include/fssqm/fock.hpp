#pragma once

#include <vector>

#include "fssqm/matrix.hpp"

namespace fssqm {

/// exp(2 pi i k / lambda) with the angle reduced mod lambda first.
Complex root_of_unity(int lambda, long k);

enum class StructureKind { Oscillator, CLambdaExtended, Table };

/// Defines the structure function F of a deformed oscillator algebra.
///
/// Oscillator:       G(n) = 1, so F(n) = n.
/// CLambdaExtended:  G(n) = 1 + alpha[n mod lambda], with sum(alpha) = 0;
///                   F follows from F(0) = 0, F(n+1) = F(n) + G(n).
/// Table:            F(0..n_max) supplied explicitly.
///
/// Everywhere in this library F is taken to vanish outside its tabulated
/// range (in particular F(m) = 0 for m < 0).
struct StructureFunctionSpec {
    StructureKind kind = StructureKind::Oscillator;
    int lambda = 0;                // CLambdaExtended only
    std::vector<double> alpha;     // CLambdaExtended only, lambda entries
    std::vector<double> values;    // Table only, F(0..n_max)
};

/// F(0..n_max) with F(0) = 0 and F(n) > 0 for 1 <= n <= n_max validated.
/// Throws validation_error naming the first offending n, or on a violated
/// alpha sum constraint, or on non-finite growth.
std::vector<double> eval_structure_function(const StructureFunctionSpec& spec, int n_max);

/// Truncated Fock-space representation of a deformed oscillator with a
/// Z_lambda grading.  Basis |0> .. |dim-1>.  Operator identities are exact
/// only on the leading block |0> .. |safe_dim-1| (safe_dim = dim - 2*lambda),
/// which leaves room for every lambda-fold operator product used here.
struct FockRep {
    int dim = 0;
    int lambda = 0;
    int safe_dim = 0;
    std::vector<double> F;            // F(0..dim)
    CMatrix N_op;                     // diag(0..dim-1)
    CMatrix a_op;                     // a|n> = sqrt(F(n)) |n-1>
    CMatrix adag_op;                  // a'|n> = sqrt(F(n+1)) |n+1>
    CMatrix T_op;                     // diag(q^n), q = exp(2 pi i / lambda)
    std::vector<CMatrix> projectors;  // P_0 .. P_{lambda-1}
};

/// Requires lambda >= 2 and dim >= 4*lambda.
FockRep build_fock_rep(const StructureFunctionSpec& spec, int lambda, int dim);

/// P_mu = (1/lambda) sum_nu q^{-mu nu} T^nu, computed from powers of T.
/// Each P_mu comes out diagonal 0/1 selecting n = mu (mod lambda).
std::vector<CMatrix> build_projectors(const FockRep& rep);

/// Residuals of the grading relations, each evaluated on the safe block and
/// scaled by (1 + norm).  Projector indices are cyclic mod lambda.
struct GradingReport {
    double number_grading;     // [N, T]
    double raise_grading;      // a' T - q^{-1} T a'
    double lower_grading;      // a T - q T a
    double number_projector;   // max_mu [N, P_mu]
    double raise_projector;    // max_mu (a' P_mu - P_{mu+1} a')
    double lower_projector;    // max_mu (a P_mu - P_{mu-1} a)
    double max_residual;
    double tolerance;
    bool passed;
};

GradingReport check_grading_relations(const FockRep& rep, double tol);

/// Top-left corner of a Fock-level (dim x dim) operator.
CMatrix safe_corner(const FockRep& rep, const CMatrix& op);

}  // namespace fssqm
