#include "fssqm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fssqm/analysis.hpp"

namespace fssqm {

namespace {

constexpr double kExactTol = 1e-12;

// ---------------------------------------------------------------------------
// Extended-precision evaluation of the symmetry-operator product identities.
//
// The products (Q_x^2 - M_1)...(Q_x^2 - M_l) [Q_x] cancel intermediates of
// order ||Q||^lambda down to ||H||, which costs ~lambda digits in double and
// would drown the 1e-9 gate at lambda = 5, dim = 40.  The identities hold for
// any tabulated F, so re-running the same arithmetic on the same F values in
// 80-bit precision measures them honestly.
// ---------------------------------------------------------------------------

using LC = std::complex<long double>;

struct LdMat {
    std::size_t n = 0;
    std::vector<LC> e;
    explicit LdMat(std::size_t size = 0) : n(size), e(size * size) {}
    LC& at(std::size_t i, std::size_t j) { return e[i * n + j]; }
    const LC& at(std::size_t i, std::size_t j) const { return e[i * n + j]; }
};

LdMat ld_matmul(const LdMat& a, const LdMat& b) {
    LdMat out(a.n);
    for (std::size_t i = 0; i < a.n; ++i)
        for (std::size_t k = 0; k < a.n; ++k) {
            const LC c = a.at(i, k);
            if (c == LC{}) continue;
            for (std::size_t j = 0; j < a.n; ++j) out.at(i, j) += c * b.at(k, j);
        }
    return out;
}

LC ld_eval(const ComponentFunction& f, long n) {
    if (f.kind == ComponentFunction::Kind::Poly) {
        const long double x = static_cast<long double>(n);
        LC acc = 0.0L;
        for (auto it = f.coeffs.rbegin(); it != f.coeffs.rend(); ++it)
            acc = acc * x + LC(it->real(), it->imag());
        return acc;
    }
    if (n < 0 || n >= static_cast<long>(f.values.size())) return 0.0L;
    const Complex v = f.values[static_cast<std::size_t>(n)];
    return {v.real(), v.imag()};
}

struct LdModel {
    int lambda = 0, dim = 0, safe = 0;
    LdMat Q1, Q2, H;
    std::vector<LdMat> M;
};

LdModel ld_build(const FssqmModel& model) {
    const int lam = model.lambda, dim = model.rep.dim;
    const std::size_t N = static_cast<std::size_t>(lam) * dim;
    const auto F = [&](long k) -> long double {
        return (k >= 0 && k <= dim) ? static_cast<long double>(model.rep.F[k]) : 0.0L;
    };

    LdMat Q(N);
    for (int i = 1; i <= lam; ++i) {
        const std::size_t br = (i < lam ? i : 0) * static_cast<std::size_t>(dim);
        const std::size_t bc = (i < lam ? i - 1 : lam - 1) * static_cast<std::size_t>(dim);
        if (i < lam) {
            for (int n = 1; n < dim; ++n)
                Q.at(br + n - 1, bc + n) = ld_eval(model.f[i - 1], n - 1 + i) * sqrtl(F(n));
        } else {
            for (int n = 0; n + lam - 1 < dim; ++n) {
                long double amp = 1.0L;
                for (int j = 1; j < lam; ++j) amp *= F(n + j);
                Q.at(br + n + lam - 1, bc + n) = ld_eval(model.f[lam - 1], n + lam - 1) * sqrtl(amp);
            }
        }
    }
    LdMat Qd(N);
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) Qd.at(j, i) = std::conj(Q.at(i, j));

    LdModel out;
    out.lambda = lam;
    out.dim = dim;
    out.safe = model.rep.safe_dim;
    out.Q1 = LdMat(N);
    out.Q2 = LdMat(N);
    const long double rs2 = 1.0L / sqrtl(2.0L);
    for (std::size_t k = 0; k < N * N; ++k) {
        out.Q1.e[k] = (Q.e[k] + Qd.e[k]) * rs2;
        out.Q2.e[k] = (Q.e[k] - Qd.e[k]) * rs2 / LC(0.0L, 1.0L);
    }

    const auto phi = [&](long m) {
        LC p = 1.0L;
        for (const auto& fi : model.f) p *= ld_eval(fi, m);
        return p;
    };
    const auto h1 = [&](long m) -> long double {
        long double pr = 1.0L;
        for (int j = 1; j < lam; ++j) pr *= F(m + 1 - j);
        if (pr == 0.0L) return 0.0L;
        return phi(m).real() * pr;
    };
    out.H = LdMat(N);
    for (int i = 1; i <= lam; ++i)
        for (int n = 0; n < dim; ++n) {
            const std::size_t k = (i - 1) * static_cast<std::size_t>(dim) + n;
            out.H.at(k, k) = h1(n + i - 1);
        }

    const auto alpha = [&](int i, long n) -> long double {
        const long double fa = std::abs(ld_eval(model.f[i - 1], n));
        if (i < lam) return fa * fa * F(n + 1 - i);
        long double pr = 1.0L;
        for (int j = 1; j < lam; ++j) pr *= F(n + 1 - j);
        return fa * fa * pr;
    };
    const int l = lam / 2;
    const auto m_i1 = [&](long n) {
        std::vector<long double> al(lam + 1), roots(2, 0.0L);
        long double s = 0.0L;
        for (int i = 1; i <= lam; ++i) {
            al[i] = alpha(i, n);
            s += al[i];
        }
        if (lam == 3) {
            roots[0] = s;
            return roots;
        }
        const long double p = (lam == 4)
                                  ? al[1] * al[3] + al[2] * al[4]
                                  : al[1] * al[3] + al[2] * al[4] + al[3] * al[5] +
                                        al[4] * al[1] + al[5] * al[2];
        const long double rad = std::max(s * s - 4.0L * p, 0.0L);
        const long double delta = sqrtl(rad);
        roots[1] = 0.5L * (s + delta);
        roots[0] = roots[1] > 0.0L ? p / roots[1] : 0.0L;
        return roots;
    };
    for (int i = 1; i <= l; ++i) {
        LdMat Mi(N);
        for (int j = 1; j <= lam; ++j)
            for (int n = 0; n < dim; ++n) {
                const std::size_t k = (j - 1) * static_cast<std::size_t>(dim) + n;
                Mi.at(k, k) = 0.5L * m_i1(n + j - 1)[i - 1];
            }
        out.M.push_back(std::move(Mi));
    }
    return out;
}

// inf-norm of the safe-projected matrix.
long double ld_safe_norm(const LdModel& m, const LdMat& a) {
    long double best = 0.0L;
    for (int bi = 0; bi < m.lambda; ++bi)
        for (int n = 0; n < m.safe; ++n) {
            const std::size_t i = bi * static_cast<std::size_t>(m.dim) + n;
            long double s = 0.0L;
            for (int bj = 0; bj < m.lambda; ++bj)
                for (int k = 0; k < m.safe; ++k)
                    s += std::abs(a.at(i, bj * static_cast<std::size_t>(m.dim) + k));
            best = std::max(best, s);
        }
    return best;
}

// Residuals of the two product identities, scaled by (1 + ||H||_safe).
std::pair<double, double> m_product_residuals(const FssqmModel& model) {
    const LdModel m = ld_build(model);
    const int l = model.lambda / 2;
    const bool odd = model.lambda % 2 != 0;
    const std::size_t N = m.H.n;
    const long double hnorm = 1.0L + ld_safe_norm(m, m.H);

    const auto chain = [&](const LdMat& Qx, long double rhs_scale) {
        LdMat X(N);
        for (std::size_t i = 0; i < N; ++i) X.at(i, i) = 1.0L;
        const LdMat Qx2 = ld_matmul(Qx, Qx);
        for (int i = 0; i < l; ++i) {
            LdMat factor = Qx2;
            for (std::size_t k = 0; k < N; ++k) factor.at(k, k) -= m.M[i].at(k, k);
            X = ld_matmul(X, factor);
        }
        if (odd) X = ld_matmul(X, Qx);
        for (std::size_t k = 0; k < N * N; ++k) X.e[k] -= rhs_scale * m.H.e[k];
        return static_cast<double>(ld_safe_norm(m, X) / hnorm);
    };

    if (odd) {
        const long double c = powl(2.0L, 0.5L - l);
        return {chain(m.Q1, c), chain(m.Q2, 0.0L)};
    }
    const long double c = powl(2.0L, 1.0L - l);
    const long double sign = (l % 2 == 0) ? 1.0L : -1.0L;
    return {chain(m.Q1, c), chain(m.Q2, sign * c)};
}

}  // namespace

bool all_passed(const std::vector<RelationResult>& results) {
    return std::all_of(results.begin(), results.end(),
                       [](const RelationResult& r) { return r.passed; });
}

std::vector<RelationResult> audit(const FssqmModel& model, double tol_rel) {
    if (tol_rel <= 0.0) throw std::invalid_argument("audit: tol_rel must be positive");
    const FockRep& rep = model.rep;
    const int lam = model.lambda;
    const int dim = rep.dim;
    const Complex q = root_of_unity(lam, 1);

    std::vector<RelationResult> out;
    const auto push = [&](std::string name, std::string ref, double residual, double tol) {
        out.push_back({std::move(name), std::move(ref), residual, tol, residual <= tol});
    };
    // Fock-level residual on the safe corner.
    const auto fock_res = [&](const CMatrix& lhs, const CMatrix& rhs) {
        return scaled_residual(safe_corner(rep, lhs), safe_corner(rep, rhs));
    };
    const CMatrix zero_f(dim, dim);
    const CMatrix id_f = CMatrix::identity(dim);
    const std::size_t bigN = static_cast<std::size_t>(lam) * dim;
    const CMatrix zero_b(bigN, bigN);
    const CMatrix id_b = CMatrix::identity(bigN);

    // Deformed-oscillator relations.
    push("gdoa-number-raise", "[N, a'] = a'",
         fock_res(q_commutator(rep.N_op, rep.adag_op, 1.0), rep.adag_op), tol_rel);
    push("gdoa-number-lower", "[N, a] = -a",
         fock_res(q_commutator(rep.N_op, rep.a_op, 1.0), -1.0 * rep.a_op), tol_rel);
    std::vector<Complex> gdiag(dim), fdiag(dim), fupdiag(dim);
    for (int n = 0; n < dim; ++n) {
        const double fn1 = n + 1 <= dim ? rep.F[n + 1] : 0.0;
        gdiag[n] = fn1 - rep.F[n];
        fdiag[n] = rep.F[n];
        fupdiag[n] = fn1;
    }
    push("gdoa-commutator", "[a, a'] = G(N)",
         fock_res(q_commutator(rep.a_op, rep.adag_op, 1.0), CMatrix::diagonal(gdiag)), tol_rel);
    push("gdoa-lowering-product", "a' a = F(N)",
         fock_res(matmul(rep.adag_op, rep.a_op), CMatrix::diagonal(fdiag)), tol_rel);
    push("gdoa-raising-product", "a a' = F(N+1)",
         fock_res(matmul(rep.a_op, rep.adag_op), CMatrix::diagonal(fupdiag)), tol_rel);

    // Grading operator.
    push("grading-power", "T^lambda = I", fock_res(mat_power(rep.T_op, lam), id_f), kExactTol);
    push("grading-unitary", "T' T = I",
         fock_res(matmul(adjoint(rep.T_op), rep.T_op), id_f), kExactTol);
    push("grading-number", "[N, T] = 0",
         fock_res(q_commutator(rep.N_op, rep.T_op, 1.0), zero_f), kExactTol);
    push("grading-raise", "a' T = q^{-1} T a'",
         fock_res(matmul(rep.adag_op, rep.T_op),
                  root_of_unity(lam, -1) * matmul(rep.T_op, rep.adag_op)),
         kExactTol);
    push("grading-lower", "a T = q T a",
         fock_res(matmul(rep.a_op, rep.T_op), q * matmul(rep.T_op, rep.a_op)), kExactTol);

    // Projectors.
    {
        double herm = 0.0, orth = 0.0, comm = 0.0, raise = 0.0, lower = 0.0;
        CMatrix sum(dim, dim);
        for (int mu = 0; mu < lam; ++mu) {
            const CMatrix& P = rep.projectors[mu];
            sum += P;
            herm = std::max(herm, fock_res(P, adjoint(P)));
            comm = std::max(comm, fock_res(q_commutator(rep.N_op, P, 1.0), zero_f));
            raise = std::max(raise, fock_res(matmul(rep.adag_op, P),
                                             matmul(rep.projectors[(mu + 1) % lam], rep.adag_op)));
            lower = std::max(lower, fock_res(matmul(rep.a_op, P),
                                             matmul(rep.projectors[(mu - 1 + lam) % lam], rep.a_op)));
            for (int nu = 0; nu < lam; ++nu) {
                const CMatrix prod = matmul(P, rep.projectors[nu]);
                orth = std::max(orth, fock_res(prod, mu == nu ? P : zero_f));
            }
        }
        push("projector-hermitian", "P_mu' = P_mu", herm, kExactTol);
        push("projector-orthogonal", "P_mu P_nu = delta_{mu,nu} P_mu", orth, kExactTol);
        push("projector-resolution", "sum_mu P_mu = I", fock_res(sum, id_f), kExactTol);
        push("projector-number", "[N, P_mu] = 0", comm, kExactTol);
        push("projector-raise", "a' P_mu = P_{mu+1} a'", raise, kExactTol);
        push("projector-lower", "a P_mu = P_{mu-1} a", lower, kExactTol);
    }

    // Conserved charges.
    push("supercharge-power", "Q^lambda = H",
         model_residual(model, mat_power(model.Q, lam), model.H), tol_rel);
    push("supercharge-conserved", "[H, Q] = 0",
         model_residual(model, q_commutator(model.H, model.Q, 1.0), zero_b), tol_rel);
    push("derivative-power", "D^lambda = H",
         model_residual(model, mat_power(model.D, lam), model.H), tol_rel);
    push("derivative-conserved", "[H, D] = 0",
         model_residual(model, q_commutator(model.H, model.D, 1.0), zero_b), tol_rel);
    push("charge-derivative-qcomm", "D Q - q Q D = 0",
         model_residual(model, q_commutator(model.D, model.Q, q), zero_b), tol_rel);

    // prod g_i = prod f_i, pointwise over n.
    {
        double worst = 0.0;
        for (int n = 0; n <= dim; ++n) {
            Complex pf = 1.0, pg = 1.0;
            for (int i = 1; i <= lam; ++i) {
                const Complex fv = model.f[i - 1].eval(n);
                pf *= fv;
                pg *= derivative_phase(lam, i) * fv;
            }
            worst = std::max(worst, std::abs(pg - pf) / (1.0 + std::abs(pf)));
        }
        push("derivative-function-product", "prod_i g_i = prod_i f_i", worst, kExactTol);
    }

    // Grading of the block model.
    push("tau-power", "tau^lambda = 1",
         scaled_residual(mat_power(model.tau, lam), id_b), kExactTol);
    push("tau-unitary", "tau' tau = I",
         scaled_residual(matmul(adjoint(model.tau), model.tau), id_b), kExactTol);
    push("tau-conserved", "[H, tau] = 0",
         model_residual(model, q_commutator(model.H, model.tau, 1.0), zero_b), kExactTol);
    push("tau-charge-qcomm", "tau Q - q Q tau = 0",
         model_residual(model, q_commutator(model.tau, model.Q, q), zero_b), kExactTol);

    // Reduction.
    push("reduction-unitary", "U U' = I",
         scaled_residual(matmul(model.U, adjoint(model.U)), id_b), kExactTol);
    {
        const auto offdiag = [&](const CMatrix& op) {
            const CMatrix t = matmul(model.U, matmul(op, adjoint(model.U)));
            const double scale = 1.0 + inf_norm(t);
            double worst = 0.0;
            for (int bi = 0; bi < lam; ++bi)
                for (int bj = 0; bj < lam; ++bj) {
                    if (bi == bj) continue;
                    worst = std::max(worst, inf_norm(block(t, bi * static_cast<std::size_t>(dim),
                                                           bj * static_cast<std::size_t>(dim),
                                                           dim, dim)) /
                                               scale);
                }
            return worst;
        };
        push("reduction-H-blockdiag", "U H U' = diag(H_0..H_{lambda-1})",
             offdiag(model.H), kExactTol);
        push("reduction-Q-blockdiag", "U Q U' = diag(Q_0..Q_{lambda-1})",
             offdiag(model.Q), kExactTol);
        push("reduction-D-blockdiag", "U D U' = diag(D_0..D_{lambda-1})",
             offdiag(model.D), kExactTol);
        // tau' = tau T^{-1} as a block operator.
        std::map<std::pair<int, int>, CMatrix> blocks;
        const CMatrix Tinv = adjoint(rep.T_op);
        for (int i = 1; i <= lam; ++i)
            blocks.emplace(std::make_pair(i, i), root_of_unity(lam, i) * Tinv);
        push("reduction-grading", "U tau U' = tau T^{-1}",
             scaled_residual(matmul(model.U, matmul(model.tau, adjoint(model.U))),
                             build_block_operator(blocks, lam, dim)),
             kExactTol);
    }

    // h_i from the closed form against the operator product (bug oracle).
    {
        double worst = 0.0;
        for (int i = 1; i <= lam; ++i) {
            CMatrix prod = CMatrix::identity(dim);
            for (int k = i - 1; k >= 1; --k) prod = matmul(prod, component_charge(rep, model.f, k));
            prod = matmul(prod, component_charge(rep, model.f, lam));
            for (int k = lam - 1; k >= i; --k) prod = matmul(prod, component_charge(rep, model.f, k));
            std::vector<Complex> diag(dim);
            for (int n = 0; n < dim; ++n) diag[n] = model.h[i - 1][n];
            worst = std::max(worst, fock_res(prod, CMatrix::diagonal(diag)));
        }
        push("hamiltonian-chain", "A_{i-1}..A_1 A_lambda..A_i = h_i(N)", worst, tol_rel);
    }

    // Symmetry operators.
    if (!model.M.empty()) {
        const int l = lam / 2;
        if (lam == 2) {
            const CMatrix Q1 = (1.0 / std::sqrt(2.0)) * (model.Q + adjoint(model.Q));
            const CMatrix Q2 = Complex(0.0, -1.0 / std::sqrt(2.0)) * (model.Q - adjoint(model.Q));
            push("symmetry-product-q1", "(Q_1^2 - M_1) = H",
                 model_residual(model, matmul(Q1, Q1) - model.M[0], model.H), tol_rel);
            push("symmetry-product-q2", "(Q_2^2 - M_1) = -H",
                 model_residual(model, matmul(Q2, Q2) - model.M[0], -1.0 * model.H), tol_rel);
        } else {
            const auto [r1, r2] = m_product_residuals(model);
            std::string head = "(Q_1^2 - M_1)";
            for (int i = 2; i <= l; ++i) head += " (Q_1^2 - M_" + std::to_string(i) + ")";
            if (lam % 2 == 0) {
                push("symmetry-product-q1", head + " = 2^{1-l} H", r1, tol_rel);
                const std::string sign = l % 2 == 0 ? "" : "-";
                push("symmetry-product-q2",
                     "(Q_2^2 - M_i) product = " + sign + "2^{1-l} H", r2, tol_rel);
            } else {
                push("symmetry-product-q1", head + " Q_1 = 2^{1/2-l} H", r1, tol_rel);
                push("symmetry-product-q2", "(Q_2^2 - M_i) product Q_2 = 0", r2, tol_rel);
            }
        }
        double commQ = 0.0, commT = 0.0;
        for (const auto& Mi : model.M) {
            commQ = std::max(commQ, model_residual(model, q_commutator(Mi, model.Q, 1.0), zero_b));
            commT = std::max(commT, model_residual(model, q_commutator(Mi, model.tau, 1.0), zero_b));
        }
        push("symmetry-commutes-charge", "[M_i, Q] = 0", commQ, tol_rel);
        push("symmetry-commutes-grading", "[M_i, tau] = 0", commT, kExactTol);
        if (lam == 4 || lam == 5)
            push("symmetry-radicand", "delta(N)^2 >= 0",
                 std::max(0.0, -model.min_radicand), 1e-10);
    }

    // Counting checks (exact integers).
    {
        const TopologyReport topo = topological_invariants(model);
        int total = 0;
        for (int c : topo.zero_mode_counts) total += c;
        push("ground-state-count", "n^(0) total = lambda(lambda-1)/2",
             std::abs(total - lam * (lam - 1) / 2), 0.0);
        int worst = 0;
        for (int i = 0; i < lam; ++i)
            for (int j = 0; j < lam; ++j)
                worst = std::max(worst, std::abs(topo.delta[i][j] - (i - j)));
        push("topological-invariants", "Delta_ij = i - j", worst, 0.0);

        const int levels = std::min(4, rep.safe_dim / lam);
        const SpectrumReport numeric = numeric_spectrum(model, levels);
        int mult_worst = 0;
        for (std::size_t k = 1; k < numeric.levels.size(); ++k)
            mult_worst = std::max(mult_worst,
                                  std::abs(numeric.levels[k].multiplicity - lam));
        push("excited-multiplicity", "every excited level is lambda-fold", mult_worst, 0.0);
    }

    return out;
}

}  // namespace fssqm
