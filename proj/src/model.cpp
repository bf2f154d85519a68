#include "fssqm/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

namespace fssqm {

namespace {

double F_ext(const FockRep& rep, long k) {
    return (k >= 0 && k <= rep.dim) ? rep.F[static_cast<std::size_t>(k)] : 0.0;
}

std::string complex_str(Complex z) {
    std::ostringstream os;
    os << "(" << z.real() << ", " << z.imag() << ")";
    return os.str();
}

void check_components(const std::vector<ComponentFunction>& f, int lambda) {
    if (static_cast<int>(f.size()) != lambda)
        throw validation_error("model: expected " + std::to_string(lambda) +
                               " component functions, got " + std::to_string(f.size()));
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i].kind == ComponentFunction::Kind::Poly) {
            if (f[i].coeffs.empty() || f[i].coeffs.size() > 9)
                throw validation_error("component f_" + std::to_string(i + 1) +
                                       ": poly needs 1..9 coefficients (degree <= 8)");
        } else if (f[i].values.empty()) {
            throw validation_error("component f_" + std::to_string(i + 1) +
                                   ": table needs at least one value");
        }
    }
}

}  // namespace

Complex ComponentFunction::eval(long n) const {
    if (kind == Kind::Poly) {
        const double x = static_cast<double>(n);
        Complex acc = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
        return acc;
    }
    if (n < 0 || n >= static_cast<long>(values.size())) return 0.0;
    return values[static_cast<std::size_t>(n)];
}

CMatrix build_block_operator(const std::map<std::pair<int, int>, CMatrix>& blocks,
                             int lambda, int dim) {
    CMatrix out(static_cast<std::size_t>(lambda) * dim, static_cast<std::size_t>(lambda) * dim);
    for (const auto& [pos, m] : blocks) {
        const auto [r, c] = pos;
        if (r < 1 || r > lambda || c < 1 || c > lambda)
            throw std::invalid_argument("build_block_operator: block index (" +
                                        std::to_string(r) + ", " + std::to_string(c) +
                                        ") out of range 1.." + std::to_string(lambda));
        if (m.rows() != static_cast<std::size_t>(dim) || m.cols() != static_cast<std::size_t>(dim))
            throw std::invalid_argument("build_block_operator: block must be dim x dim");
        set_block(out, static_cast<std::size_t>(r - 1) * dim,
                  static_cast<std::size_t>(c - 1) * dim, m);
    }
    return out;
}

Complex derivative_phase(int lambda, int i) {
    const double arg = -std::numbers::pi * static_cast<double>(lambda - 2 * i + 1) / lambda;
    return {std::cos(arg), std::sin(arg)};
}

namespace {

CMatrix component_with(const FockRep& rep, const std::vector<ComponentFunction>& f,
                       int i, Complex phase) {
    const int lam = rep.lambda;
    if (i < 1 || i > lam)
        throw std::invalid_argument("component index out of range 1..lambda");
    CMatrix A(rep.dim, rep.dim);
    if (i < lam) {
        for (int n = 1; n < rep.dim; ++n)
            A(n - 1, n) = phase * f[i - 1].eval(n - 1 + i) * std::sqrt(rep.F[n]);
    } else {
        for (int n = 0; n + lam - 1 < rep.dim; ++n) {
            double amp = 1.0;
            for (int j = 1; j < lam; ++j) amp *= rep.F[n + j];
            A(n + lam - 1, n) = phase * f[lam - 1].eval(n + lam - 1) * std::sqrt(amp);
        }
    }
    return A;
}

}  // namespace

CMatrix component_charge(const FockRep& rep, const std::vector<ComponentFunction>& f, int i) {
    return component_with(rep, f, i, 1.0);
}

CMatrix component_derivative(const FockRep& rep, const std::vector<ComponentFunction>& f, int i) {
    return component_with(rep, f, i, derivative_phase(rep.lambda, i));
}

std::vector<Complex> phi_table(const FockRep& rep, const std::vector<ComponentFunction>& f) {
    std::vector<Complex> phi(rep.dim + rep.lambda - 1);
    for (std::size_t m = 0; m < phi.size(); ++m) {
        Complex p = 1.0;
        for (const auto& fi : f) p *= fi.eval(static_cast<long>(m));
        phi[m] = p;
    }
    return phi;
}

void validate_phi(const FockRep& rep, const std::vector<Complex>& phi) {
    for (int n = rep.lambda - 1; n <= rep.dim; ++n) {
        const Complex v = phi[n];
        const bool real_ok = std::abs(v.imag()) <= 1e-12 * (1.0 + std::abs(v));
        if (!real_ok || v.real() <= 0.0)
            throw validation_error("phi(n) must lie in R+ for n >= lambda-1; phi(" +
                                   std::to_string(n) + ") = " + complex_str(v));
    }
}

CMatrix build_supercharge(const FockRep& rep, const std::vector<ComponentFunction>& f) {
    check_components(f, rep.lambda);
    validate_phi(rep, phi_table(rep, f));
    std::map<std::pair<int, int>, CMatrix> blocks;
    for (int i = 1; i < rep.lambda; ++i)
        blocks.emplace(std::make_pair(i + 1, i), component_charge(rep, f, i));
    blocks.emplace(std::make_pair(1, rep.lambda), component_charge(rep, f, rep.lambda));
    return build_block_operator(blocks, rep.lambda, rep.dim);
}

CMatrix build_covariant_derivative(const FockRep& rep, const std::vector<ComponentFunction>& f) {
    check_components(f, rep.lambda);
    std::map<std::pair<int, int>, CMatrix> blocks;
    for (int i = 1; i < rep.lambda; ++i)
        blocks.emplace(std::make_pair(i + 1, i), component_derivative(rep, f, i));
    blocks.emplace(std::make_pair(1, rep.lambda), component_derivative(rep, f, rep.lambda));
    return build_block_operator(blocks, rep.lambda, rep.dim);
}

HamiltonianParts build_hamiltonian(const FockRep& rep, const std::vector<ComponentFunction>& f) {
    check_components(f, rep.lambda);
    HamiltonianParts parts;
    parts.phi = phi_table(rep, f);
    const auto h1 = [&](long m) {
        double pr = 1.0;
        for (int j = 1; j < rep.lambda; ++j) pr *= F_ext(rep, m + 1 - j);
        if (pr == 0.0) return 0.0;  // phi may be complex below lambda-1; F kills it
        return parts.phi[m].real() * pr;
    };
    parts.h_tables.resize(rep.lambda);
    std::map<std::pair<int, int>, CMatrix> blocks;
    for (int i = 1; i <= rep.lambda; ++i) {
        auto& hi = parts.h_tables[i - 1];
        hi.resize(rep.dim);
        std::vector<Complex> diag(rep.dim);
        for (int n = 0; n < rep.dim; ++n) {
            hi[n] = h1(n + i - 1);
            diag[n] = hi[n];
        }
        blocks.emplace(std::make_pair(i, i), CMatrix::diagonal(diag));
    }
    parts.H = build_block_operator(blocks, rep.lambda, rep.dim);
    return parts;
}

CMatrix build_grading_tau(int lambda, int dim) {
    std::map<std::pair<int, int>, CMatrix> blocks;
    for (int i = 1; i <= lambda; ++i)
        blocks.emplace(std::make_pair(i, i),
                       root_of_unity(lambda, i) * CMatrix::identity(dim));
    return build_block_operator(blocks, lambda, dim);
}

CMatrix build_reduction_unitary(const FockRep& rep) {
    std::map<std::pair<int, int>, CMatrix> blocks;
    for (int i = 1; i <= rep.lambda; ++i)
        for (int j = 1; j <= rep.lambda; ++j)
            blocks.emplace(std::make_pair(i, j),
                           rep.projectors[((i - j) % rep.lambda + rep.lambda) % rep.lambda]);
    return build_block_operator(blocks, rep.lambda, rep.dim);
}

namespace {

// alpha_i(n) = |f_i(n)|^2 F(n+1-i) for i < lambda,
// alpha_lambda(n) = |f_lambda(n)|^2 prod_{j<lambda} F(n+1-j).
double alpha_value(const FockRep& rep, const std::vector<ComponentFunction>& f, int i, long n) {
    const double fa = std::abs(f[i - 1].eval(n));
    if (i < rep.lambda) return fa * fa * F_ext(rep, n + 1 - i);
    double pr = 1.0;
    for (int j = 1; j < rep.lambda; ++j) pr *= F_ext(rep, n + 1 - j);
    return fa * fa * pr;
}

}  // namespace

MOperators build_M_operators(const FssqmModel& model) {
    const int lam = model.lambda;
    const FockRep& rep = model.rep;
    MOperators out;
    if (lam == 2) {
        // Degenerate case: the product law collapses to Q_1^2 - M_1 = H, so
        // M_1 = Q_1^2 - H = (1/2){Q, Q'}, whose diagonal closed form is
        // m_11(n) = (|f_1(n)|^2 + |f_2(n)|^2) F(n).
        out.m1.resize(1);
        auto& t = out.m1[0];
        t.resize(rep.dim + 1);
        for (int n = 0; n <= rep.dim; ++n) {
            const double a1 = std::abs(model.f[0].eval(n));
            const double a2 = std::abs(model.f[1].eval(n));
            t[n] = (a1 * a1 + a2 * a2) * F_ext(rep, n);
        }
        std::map<std::pair<int, int>, CMatrix> blocks;
        for (int j = 1; j <= 2; ++j) {
            std::vector<Complex> diag(rep.dim);
            for (int n = 0; n < rep.dim; ++n) diag[n] = 0.5 * t[n + j - 1];
            blocks.emplace(std::make_pair(j, j), CMatrix::diagonal(diag));
        }
        out.M.push_back(build_block_operator(blocks, 2, rep.dim));
        return out;
    }
    if (lam < 3 || lam > 5)
        throw validation_error("symmetry operators M_i are unsupported for lambda = " +
                               std::to_string(lam) + " (supported: 2, 3, 4, 5)");
    const int l = lam / 2;
    const long top = rep.dim + lam - 2;
    out.m1.assign(l, std::vector<double>(top + 1, 0.0));
    out.min_radicand = 0.0;
    for (long n = 0; n <= top; ++n) {
        std::vector<double> al(lam + 1);
        double s = 0.0;
        for (int i = 1; i <= lam; ++i) {
            al[i] = alpha_value(rep, model.f, i, n);
            s += al[i];
        }
        if (lam == 3) {
            out.m1[0][n] = s;
            continue;
        }
        const double p = (lam == 4)
                             ? al[1] * al[3] + al[2] * al[4]
                             : al[1] * al[3] + al[2] * al[4] + al[3] * al[5] +
                                   al[4] * al[1] + al[5] * al[2];
        double rad = s * s - 4.0 * p;
        if (rad < 0.0) {
            if (rad < -1e-10)
                throw validation_error("symmetry operator radicand delta(n)^2 = " +
                                       std::to_string(rad) + " < -1e-10 at n = " +
                                       std::to_string(n));
            out.min_radicand = std::min(out.min_radicand, rad);
            rad = 0.0;
        }
        const double delta = std::sqrt(rad);
        const double m2 = 0.5 * (s + delta);
        out.m1[1][n] = m2;
        out.m1[0][n] = m2 > 0.0 ? p / m2 : 0.0;  // stable smaller root, = (s - delta)/2
    }
    for (int i = 1; i <= l; ++i) {
        std::map<std::pair<int, int>, CMatrix> blocks;
        for (int j = 1; j <= lam; ++j) {
            std::vector<Complex> diag(rep.dim);
            for (int n = 0; n < rep.dim; ++n) diag[n] = 0.5 * out.m1[i - 1][n + j - 1];
            blocks.emplace(std::make_pair(j, j), CMatrix::diagonal(diag));
        }
        out.M.push_back(build_block_operator(blocks, lam, rep.dim));
    }
    return out;
}

SsqmPair build_ssqm_limit(const FssqmModel& model) {
    if (model.lambda != 2)
        throw validation_error("ssqm limit requires lambda = 2");
    const FockRep& rep = model.rep;
    for (int n = 0; n <= rep.dim; ++n) {
        const Complex f1 = model.f[0].eval(n), f2 = model.f[1].eval(n);
        if (std::abs(f1 - f2) > 1e-12 * (1.0 + std::abs(f1)))
            throw validation_error("ssqm limit requires f_1 = f_2; differ at n = " +
                                   std::to_string(n));
        if (std::abs(f1.imag()) > 1e-12 * (1.0 + std::abs(f1)) ||
            (n >= 1 && f1.real() <= 0.0))
            throw validation_error("ssqm limit requires real f with f(n) > 0 for n >= 1; f(" +
                                   std::to_string(n) + ") = " + complex_str(f1));
    }
    // (Q + iD)/2 collapses to the single block f(N+1) a at (2,1); building it
    // structurally keeps Qcal^2 an exact zero.
    CMatrix lower(rep.dim, rep.dim);
    for (int n = 1; n < rep.dim; ++n)
        lower(n - 1, n) = model.f[0].eval(n).real() * std::sqrt(rep.F[n]);
    SsqmPair pair;
    pair.Qcal = build_block_operator({{{2, 1}, lower}}, 2, rep.dim);
    pair.Qcal_dag = adjoint(pair.Qcal);
    if (inf_norm(matmul(pair.Qcal, pair.Qcal)) != 0.0)
        throw consistency_error("ssqm limit: Qcal^2 is not structurally zero");
    const CMatrix anti = matmul(pair.Qcal, pair.Qcal_dag) + matmul(pair.Qcal_dag, pair.Qcal);
    const double r = model_residual(model, anti, model.H);
    if (r > 1e-12)
        throw consistency_error("ssqm limit: {Qcal, Qcal'} != H, residual " + std::to_string(r));
    return pair;
}

FssqmModel build_model(const StructureFunctionSpec& spec, int lambda, int dim,
                       std::vector<ComponentFunction> f, double tol) {
    if (tol <= 0.0) throw validation_error("model: tolerance must be positive");
    check_components(f, lambda);
    FssqmModel model;
    model.lambda = lambda;
    model.rep = build_fock_rep(spec, lambda, dim);
    model.f = std::move(f);
    model.tolerance = tol;
    model.phi = phi_table(model.rep, model.f);
    validate_phi(model.rep, model.phi);
    model.Q = build_supercharge(model.rep, model.f);
    auto parts = build_hamiltonian(model.rep, model.f);
    model.H = std::move(parts.H);
    model.h = std::move(parts.h_tables);
    model.D = build_covariant_derivative(model.rep, model.f);
    model.tau = build_grading_tau(lambda, dim);
    model.U = build_reduction_unitary(model.rep);
    if (lambda <= 5) {
        auto m = build_M_operators(model);
        model.M = std::move(m.M);
        model.m1 = std::move(m.m1);
        model.min_radicand = m.min_radicand;
    }
    return model;
}

CMatrix safe_project(const FssqmModel& model, const CMatrix& op) {
    const int lam = model.lambda, dim = model.rep.dim, safe = model.rep.safe_dim;
    CMatrix out(static_cast<std::size_t>(lam) * safe, static_cast<std::size_t>(lam) * safe);
    for (int br = 0; br < lam; ++br)
        for (int bc = 0; bc < lam; ++bc)
            set_block(out, static_cast<std::size_t>(br) * safe,
                      static_cast<std::size_t>(bc) * safe,
                      block(op, static_cast<std::size_t>(br) * dim,
                            static_cast<std::size_t>(bc) * dim, safe, safe));
    return out;
}

CMatrix safe_columns(const FssqmModel& model, const CMatrix& op) {
    const int lam = model.lambda, dim = model.rep.dim, safe = model.rep.safe_dim;
    CMatrix out(op.rows(), static_cast<std::size_t>(lam) * safe);
    for (int bc = 0; bc < lam; ++bc)
        set_block(out, 0, static_cast<std::size_t>(bc) * safe,
                  block(op, 0, static_cast<std::size_t>(bc) * dim, op.rows(), safe));
    return out;
}

double model_residual(const FssqmModel& model, const CMatrix& lhs, const CMatrix& rhs) {
    return scaled_residual(safe_project(model, lhs), safe_project(model, rhs));
}

}  // namespace fssqm
