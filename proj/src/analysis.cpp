#include "fssqm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fssqm {

namespace {

double F_ext(const FockRep& rep, long k) {
    return (k >= 0 && k <= rep.dim) ? rep.F[static_cast<std::size_t>(k)] : 0.0;
}

// d_j = j(2 lambda - j - 1)/2; ground state i belongs to block j with
// d_{j-1} + 1 <= i <= d_j.
int ground_block_index(int lambda, int i) {
    for (int j = 1; j < lambda; ++j) {
        const int dj = j * (2 * lambda - j - 1) / 2;
        if (i <= dj) return j;
    }
    return lambda;
}

int d_of(int lambda, int j) { return j * (2 * lambda - j - 1) / 2; }

std::vector<SpectrumLevel> group_levels(std::vector<std::pair<double, SpectrumMember>> states,
                                        double zero_tol) {
    std::stable_sort(states.begin(), states.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<SpectrumLevel> levels;
    for (const auto& [e, m] : states) {
        if (levels.empty() || e - levels.back().energy > zero_tol) {
            levels.push_back({e, 0, {}});
        }
        levels.back().members.push_back(m);
        levels.back().multiplicity += 1;
    }
    return levels;
}

void require_nonnegative(const std::vector<SpectrumLevel>& levels, double zero_tol) {
    if (!levels.empty() && levels.front().energy < -zero_tol)
        throw validation_error("spectrum: negative energy " +
                               std::to_string(levels.front().energy));
}

}  // namespace

double spectrum_zero_tol(const FssqmModel& model) {
    return 1e-8 * (1.0 + inf_norm(safe_project(model, model.H)));
}

SpectrumReport analytic_spectrum(const FssqmModel& model, int n_levels) {
    const int lam = model.lambda;
    const int safe = model.rep.safe_dim;
    if (n_levels < 1) throw std::invalid_argument("analytic_spectrum: n_levels < 1");
    if (n_levels * lam > safe)
        throw validation_error("analytic_spectrum: " + std::to_string(n_levels) +
                               " levels need fock_dimension >= " +
                               std::to_string(lam * (n_levels + 2)));
    const double zero_tol = spectrum_zero_tol(model);
    std::vector<std::pair<double, SpectrumMember>> states;

    // Ground level, lambda(lambda-1)/2 states: |i - d_{j-1} - 1> in block j.
    for (int i = 1; i <= lam * (lam - 1) / 2; ++i) {
        const int j = ground_block_index(lam, i);
        const int n = i - d_of(lam, j - 1) - 1;
        states.push_back({0.0, {j, n, root_of_unity(lam, j)}});
    }
    // Excited level n: E_n = phi(n+lambda-2) prod_j F(n+lambda-1-j), states
    // |n + lambda - 1 - i> in block i.  Enumerate every level whose members
    // all fit in the safe block, then sort and keep the lowest n_levels.
    for (int n = 1; n + lam - 2 < safe; ++n) {
        double e = model.phi[n + lam - 2].real();
        for (int j = 1; j < lam; ++j) e *= F_ext(model.rep, n + lam - 1 - j);
        for (int i = 1; i <= lam; ++i)
            states.push_back({e, {i, n + lam - 1 - i, root_of_unity(lam, i)}});
    }

    SpectrumReport report;
    report.zero_tol = zero_tol;
    report.levels = group_levels(std::move(states), zero_tol);
    require_nonnegative(report.levels, zero_tol);
    if (static_cast<int>(report.levels.size()) > n_levels) report.levels.resize(n_levels);
    return report;
}

SpectrumReport numeric_spectrum(const FssqmModel& model, int n_levels) {
    const int lam = model.lambda;
    const int safe = model.rep.safe_dim;
    if (n_levels < 1) throw std::invalid_argument("numeric_spectrum: n_levels < 1");
    if (n_levels * lam > safe)
        throw validation_error("numeric_spectrum: " + std::to_string(n_levels) +
                               " levels need fock_dimension >= " +
                               std::to_string(lam * (n_levels + 2)));
    const double zero_tol = spectrum_zero_tol(model);

    std::vector<std::pair<double, SpectrumMember>> states;
    for (int i = 1; i <= lam; ++i)
        for (int n = 0; n < safe; ++n)
            states.push_back({model.h[i - 1][n], {i, n, root_of_unity(lam, i)}});

    // Independent eigensolve of the same block; H is diagonal by
    // construction, so this guards the h tables against assembly bugs.
    const CMatrix Hs = safe_project(model, model.H);
    const std::vector<double> ev = hermitian_eigenvalues(Hs, 1e-12);
    std::vector<double> diag_sorted;
    diag_sorted.reserve(states.size());
    for (const auto& s : states) diag_sorted.push_back(s.first);
    std::sort(diag_sorted.begin(), diag_sorted.end());
    const double scale = 1.0 + inf_norm(Hs);
    for (std::size_t k = 0; k < ev.size(); ++k)
        if (std::abs(ev[k] - diag_sorted[k]) > 1e-12 * scale)
            throw consistency_error("numeric_spectrum: eigensolve disagrees with H diagonal");

    SpectrumReport report;
    report.zero_tol = zero_tol;
    report.levels = group_levels(std::move(states), zero_tol);
    require_nonnegative(report.levels, zero_tol);
    if (static_cast<int>(report.levels.size()) > n_levels) report.levels.resize(n_levels);
    return report;
}

bool spectra_match(const SpectrumReport& a, const SpectrumReport& b, double tol) {
    if (a.levels.size() != b.levels.size()) return false;
    for (std::size_t k = 0; k < a.levels.size(); ++k) {
        const auto& la = a.levels[k];
        const auto& lb = b.levels[k];
        if (la.multiplicity != lb.multiplicity) return false;
        if (std::abs(la.energy - lb.energy) > tol * (1.0 + std::abs(la.energy))) return false;
    }
    return true;
}

OrbitMap supercharge_orbit(const FssqmModel& model, int level) {
    if (level < 0) throw std::invalid_argument("supercharge_orbit: level < 0");
    const SpectrumReport report = analytic_spectrum(model, level + 1);
    if (level >= static_cast<int>(report.levels.size()))
        throw validation_error("supercharge_orbit: level out of range");
    const auto& members = report.levels[level].members;
    const int dim = model.rep.dim;
    const double ann_tol = model.tolerance * (1.0 + inf_norm(model.Q));

    OrbitMap map;
    map.level = level;
    for (std::size_t m = 0; m < members.size(); ++m) {
        CMatrix v(model.Q.cols(), 1);
        v((members[m].block - 1) * static_cast<std::size_t>(dim) + members[m].fock, 0) = 1.0;
        const CMatrix w = matmul(model.Q, v);
        OrbitEntry entry{static_cast<int>(m), false, -1, 0.0};
        double rest = 0.0;
        for (std::size_t t = 0; t < members.size(); ++t) {
            const Complex amp =
                w((members[t].block - 1) * static_cast<std::size_t>(dim) + members[t].fock, 0);
            if (std::abs(amp) > std::abs(entry.amplitude)) {
                entry.target = static_cast<int>(t);
                entry.amplitude = amp;
            }
        }
        for (std::size_t r = 0; r < w.rows(); ++r) rest += std::abs(w(r, 0));
        if (rest <= ann_tol) {
            entry.annihilated = true;
            entry.target = -1;
            entry.amplitude = 0.0;
        } else if (rest - std::abs(entry.amplitude) > ann_tol) {
            throw consistency_error("supercharge_orbit: Q leaks outside the level");
        }
        map.actions.push_back(entry);
    }
    return map;
}

std::string to_string(SectorClass c) {
    switch (c) {
        case SectorClass::UnbrokenNondegenerate: return "unbroken-nondegenerate";
        case SectorClass::UnbrokenDegenerate: return "unbroken-degenerate";
        case SectorClass::BrokenZeroEnergy: return "broken-zero-energy";
        case SectorClass::BrokenPositiveEnergy: return "broken-positive-energy";
    }
    return "?";
}

namespace {

// Sum over i of op_i P_{(mu - i + 1) mod lambda}; op_i supplied per block.
CMatrix sector_sum(const FssqmModel& model, int mu,
                   const std::vector<CMatrix>& per_block) {
    const int lam = model.lambda;
    CMatrix out(model.rep.dim, model.rep.dim);
    for (int i = 1; i <= lam; ++i) {
        const int idx = (((mu - i + 1) % lam) + lam) % lam;
        out += matmul(per_block[i - 1], model.rep.projectors[idx]);
    }
    return out;
}

CMatrix u_block(const FssqmModel& model, const CMatrix& op, int mu) {
    const CMatrix t = matmul(model.U, matmul(op, adjoint(model.U)));
    const std::size_t d = model.rep.dim;
    return block(t, mu * d, mu * d, d, d);
}

}  // namespace

SectorReport reduce_sector(const FssqmModel& model, int mu) {
    const int lam = model.lambda;
    if (mu < 0 || mu >= lam)
        throw std::invalid_argument("reduce_sector: mu out of range 0..lambda-1");
    const FockRep& rep = model.rep;
    const int dim = rep.dim;

    std::vector<CMatrix> A(lam), B(lam), Hd(lam);
    for (int i = 1; i <= lam; ++i) {
        A[i - 1] = component_charge(rep, model.f, i);
        B[i - 1] = component_derivative(rep, model.f, i);
        std::vector<Complex> diag(dim);
        for (int n = 0; n < dim; ++n) diag[n] = model.h[i - 1][n];
        Hd[i - 1] = CMatrix::diagonal(diag);
    }

    SectorReport report;
    report.mu = mu;
    report.Q_mu = sector_sum(model, mu, A);
    report.D_mu = sector_sum(model, mu, B);
    report.H_mu = sector_sum(model, mu, Hd);
    report.tau_mu = root_of_unity(lam, mu + 1) * adjoint(rep.T_op);  // q^{mu+1} T^{-1}
    for (std::size_t i = 0; i < model.M.size(); ++i) {
        std::vector<CMatrix> Md(lam);
        for (int j = 1; j <= lam; ++j) {
            std::vector<Complex> diag(dim);
            for (int n = 0; n < dim; ++n) diag[n] = 0.5 * model.m1[i][n + j - 1];
            Md[j - 1] = CMatrix::diagonal(diag);
        }
        report.M_mu.push_back(sector_sum(model, mu, Md));
    }

    // Every sector operator must agree with the matching diagonal block of
    // the U-conjugated full operator.
    double r = 0.0;
    r = std::max(r, scaled_residual(report.Q_mu, u_block(model, model.Q, mu)));
    r = std::max(r, scaled_residual(report.D_mu, u_block(model, model.D, mu)));
    r = std::max(r, scaled_residual(report.H_mu, u_block(model, model.H, mu)));
    r = std::max(r, scaled_residual(report.tau_mu, u_block(model, model.tau, mu)));
    for (std::size_t i = 0; i < report.M_mu.size(); ++i)
        r = std::max(r, scaled_residual(report.M_mu[i], u_block(model, model.M[i], mu)));
    report.crosscheck_residual = r;
    if (r > model.tolerance)
        throw consistency_error("reduce_sector: sector operators disagree with U-blocks, residual " +
                                std::to_string(r));

    const double zero_tol = spectrum_zero_tol(model);
    std::vector<std::pair<double, SpectrumMember>> states;
    for (int n = 0; n < rep.safe_dim; ++n) {
        const int gi = (((mu - n + 1) % lam) + lam) % lam;
        const int grade_index = gi == 0 ? lam : gi;
        states.push_back({report.H_mu(n, n).real(),
                          {grade_index, n, root_of_unity(lam, grade_index)}});
    }
    report.levels = group_levels(std::move(states), zero_tol);
    require_nonnegative(report.levels, zero_tol);
    report.ground_energy = report.levels.front().energy;
    report.ground_degeneracy = report.levels.front().multiplicity;

    if (mu == 0) {
        report.classification = SectorClass::UnbrokenNondegenerate;
    } else if (mu == lam - 1) {
        report.classification = SectorClass::BrokenPositiveEnergy;
    } else {
        bool all_zero = true;
        for (int i = 1; i <= mu; ++i) {
            const Complex v = model.f[i - 1].eval(mu);
            double scale = 1.0;
            for (int n = 0; n <= model.rep.dim; ++n)
                scale = std::max(scale, std::abs(model.f[i - 1].eval(n)));
            if (std::abs(v) > 1e-8 * scale) all_zero = false;
        }
        report.classification = all_zero ? SectorClass::UnbrokenDegenerate
                                         : SectorClass::BrokenZeroEnergy;
    }
    return report;
}

std::vector<double> sector_spectrum_formula(const FssqmModel& model, int mu, int k_max) {
    const int lam = model.lambda;
    if (mu < 0 || mu >= lam)
        throw std::invalid_argument("sector_spectrum_formula: mu out of range");
    if (k_max < 0 || lam * k_max + lam > model.rep.safe_dim)
        throw validation_error("sector_spectrum_formula: k_max needs lambda*(k_max+1) <= safe_dim");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(lam) * (k_max + 1));
    for (int k = 0; k <= k_max; ++k) {
        for (int nu = 0; nu < lam; ++nu) {
            const int base = nu <= mu ? lam * k + mu : lam * (k + 1) + mu;
            double e = model.phi[base].real();
            for (int i = 1; i < lam; ++i) e *= F_ext(model.rep, base - i + 1);
            out.push_back(e);
        }
    }
    return out;
}

double sector_formula_residual(const FssqmModel& model, int mu) {
    const int lam = model.lambda;
    const int safe = model.rep.safe_dim;
    const int k_max = safe / lam - 1;
    const auto formula = sector_spectrum_formula(model, mu, k_max);
    const SectorReport sector = reduce_sector(model, mu);
    double worst = 0.0;
    for (std::size_t m = 0; m < formula.size(); ++m) {
        const double diag = sector.H_mu(m, m).real();
        worst = std::max(worst, std::abs(formula[m] - diag) / (1.0 + std::abs(formula[m])));
    }
    return worst;
}

namespace {

TopologyReport topology_from_counts(int lambda, std::vector<int> n0,
                                    std::vector<Complex> grades) {
    TopologyReport t;
    t.grades = std::move(grades);
    t.multiplicities.assign(lambda, 1);
    t.zero_mode_counts = std::move(n0);
    t.delta.assign(lambda, std::vector<int>(lambda, 0));
    for (int i = 0; i < lambda; ++i)
        for (int j = 0; j < lambda; ++j)
            t.delta[i][j] = t.multiplicities[i] * t.zero_mode_counts[j] -
                            t.multiplicities[j] * t.zero_mode_counts[i];
    return t;
}

}  // namespace

TopologyReport topological_invariants(const FssqmModel& model) {
    const int lam = model.lambda;
    const int dim = model.rep.dim;
    std::vector<int> n0(lam);
    std::vector<Complex> grades(lam);
    for (int i = 1; i <= lam; ++i) {
        grades[i - 1] = root_of_unity(lam, i);
        const CMatrix corner =
            block(model.H, (i - 1) * static_cast<std::size_t>(dim),
                  (i - 1) * static_cast<std::size_t>(dim), model.rep.safe_dim,
                  model.rep.safe_dim);
        n0[i - 1] = static_cast<int>(nullspace_dim(corner, 1e-8));
    }
    return topology_from_counts(lam, std::move(n0), std::move(grades));
}

TopologyReport sector_invariants(const FssqmModel& model, int mu) {
    const int lam = model.lambda;
    const SectorReport sector = reduce_sector(model, mu);
    std::vector<int> n0(lam, 0);
    std::vector<Complex> grades(lam);
    for (int i = 1; i <= lam; ++i) grades[i - 1] = root_of_unity(lam, i);
    for (int nu = 0; nu < lam; ++nu) {
        // Residue class F_nu carries grade q^{mu - nu + 1}.
        const int gi = (((mu - nu + 1) % lam) + lam) % lam;
        const int grade_index = gi == 0 ? lam : gi;
        std::vector<Complex> diag;
        for (int n = nu; n < model.rep.safe_dim; n += lam)
            diag.push_back(sector.H_mu(n, n));
        if (diag.empty()) continue;
        n0[grade_index - 1] =
            static_cast<int>(nullspace_dim(CMatrix::diagonal(diag), 1e-8));
    }
    return topology_from_counts(lam, std::move(n0), std::move(grades));
}

}  // namespace fssqm
