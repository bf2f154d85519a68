#pragma once

#include <map>
#include <utility>
#include <vector>

#include "fssqm/fock.hpp"
#include "fssqm/matrix.hpp"

namespace fssqm {

/// One of the component functions f_i entering the supercharge.
/// Poly: complex coefficients c_0 + c_1 n + ... (degree <= 8), evaluated at
/// integer n.  Table: explicit values over n = 0..size-1, zero outside.
struct ComponentFunction {
    enum class Kind { Poly, Table };
    Kind kind = Kind::Poly;
    std::vector<Complex> coeffs;
    std::vector<Complex> values;

    Complex eval(long n) const;

    static ComponentFunction constant(Complex c) { return {Kind::Poly, {c}, {}}; }
    static ComponentFunction poly(std::vector<Complex> c) { return {Kind::Poly, std::move(c), {}}; }
    static ComponentFunction table(std::vector<Complex> v) { return {Kind::Table, {}, std::move(v)}; }
};

/// A fractional supersymmetry model of order lambda on lambda stacked copies
/// of the Fock space.  Blocks are indexed 1..lambda; the component i (block
/// row/column i) carries grade q^i.
///
/// Q, D, H, tau, U are (lambda*dim) square.  h[i-1][n] is the diagonal of
/// H's block i; phi[m] = prod_i f_i(m).  For lambda <= 5, M holds the
/// floor(lambda/2) symmetry operators and m1[i-1][m] their generating
/// diagonal m_{i1}(m) (m_{ij}(n) = m_{i1}(n+j-1)).
struct FssqmModel {
    int lambda = 0;
    FockRep rep;
    std::vector<ComponentFunction> f;
    std::vector<Complex> phi;              // m = 0..dim+lambda-2
    std::vector<std::vector<double>> h;    // h[i-1][n], i = 1..lambda
    CMatrix Q, D, H, tau, U;
    std::vector<CMatrix> M;
    std::vector<std::vector<double>> m1;   // m = 0..dim+lambda-2
    double min_radicand = 0.0;             // smallest delta(n)^2 seen (lambda = 4, 5)
    double tolerance = 1e-9;
};

/// Place dim x dim blocks into a (lambda*dim) square matrix; keys are
/// (row, col) with 1-based block indices.
CMatrix build_block_operator(const std::map<std::pair<int, int>, CMatrix>& blocks,
                             int lambda, int dim);

/// A_i = f_i(N+i) a for i = 1..lambda-1, A_lambda = f_lambda(N) (a')^{lambda-1}.
CMatrix component_charge(const FockRep& rep, const std::vector<ComponentFunction>& f, int i);

/// B_i: same pattern with g_i = derivative_phase(lambda, i) f_i.
CMatrix component_derivative(const FockRep& rep, const std::vector<ComponentFunction>& f, int i);

/// q^{-(lambda - 2i + 1)/2} on the principal branch.
Complex derivative_phase(int lambda, int i);

/// phi(m) = prod_i f_i(m) for m = 0..dim+lambda-2.
std::vector<Complex> phi_table(const FockRep& rep, const std::vector<ComponentFunction>& f);

/// Throws validation_error naming the first n in [lambda-1, dim] where
/// phi(n) fails to be real and positive.
void validate_phi(const FockRep& rep, const std::vector<Complex>& phi);

/// Q with A_i at block (i+1, i) and A_lambda at block (1, lambda).
CMatrix build_supercharge(const FockRep& rep, const std::vector<ComponentFunction>& f);

struct HamiltonianParts {
    CMatrix H;
    std::vector<std::vector<double>> h_tables;
    std::vector<Complex> phi;
};

/// H block i carries diag over n of h_i(n) = h_1(n+i-1), with
/// h_1(m) = phi(m) prod_{j=1}^{lambda-1} F(m+1-j) and F zero outside range.
HamiltonianParts build_hamiltonian(const FockRep& rep, const std::vector<ComponentFunction>& f);

/// D with B_i blocks mirroring Q's pattern.
CMatrix build_covariant_derivative(const FockRep& rep, const std::vector<ComponentFunction>& f);

/// Block-diagonal grading with block i = q^i I.
CMatrix build_grading_tau(int lambda, int dim);

/// U with block (i, j) = P_{(i-j) mod lambda}; unitary by projector algebra.
CMatrix build_reduction_unitary(const FockRep& rep);

struct MOperators {
    std::vector<CMatrix> M;
    std::vector<std::vector<double>> m1;
    double min_radicand = 0.0;
};

/// The floor(lambda/2) Hermitian operators commuting with tau and Q.
/// Supports lambda = 3, 4, 5 (closed forms) plus the degenerate lambda = 2
/// case M_1 = Q_1^2 - H.  Requires model.Q and model.H to be built.
/// Radicands below -1e-10 raise validation_error; small negatives clamp to 0.
MOperators build_M_operators(const FssqmModel& model);

struct SsqmPair {
    CMatrix Qcal;      // (Q + iD)/2, structurally a single block f(N+1) a
    CMatrix Qcal_dag;
};

/// lambda = 2 specialisation with f_1 = f_2 = f real, f(n) > 0 for n >= 1.
/// Verifies Qcal^2 = 0 and {Qcal, Qcal'} = H on the safe block.
SsqmPair build_ssqm_limit(const FssqmModel& model);

/// Assemble the full model; tol is recorded and used by later analyses.
FssqmModel build_model(const StructureFunctionSpec& spec, int lambda, int dim,
                       std::vector<ComponentFunction> f, double tol = 1e-9);

/// Restriction of a (lambda*dim) block operator to the safe block: every
/// block keeps rows/columns with Fock index < safe_dim.
CMatrix safe_project(const FssqmModel& model, const CMatrix& op);

/// Keep safe columns but all rows; the right restriction for kernel counts,
/// since it keeps raising amplitudes out of the truncation edge.
CMatrix safe_columns(const FssqmModel& model, const CMatrix& op);

/// scaled_residual of two block operators after safe projection.
double model_residual(const FssqmModel& model, const CMatrix& lhs, const CMatrix& rhs);

}  // namespace fssqm
