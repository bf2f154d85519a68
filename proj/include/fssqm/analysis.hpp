#pragma once

#include <string>
#include <vector>

#include "fssqm/model.hpp"

namespace fssqm {

struct SpectrumMember {
    int block;      // 1..lambda
    int fock;       // Fock index n
    Complex grade;  // q^block
};

struct SpectrumLevel {
    double energy;
    int multiplicity;
    std::vector<SpectrumMember> members;
};

struct SpectrumReport {
    std::vector<SpectrumLevel> levels;  // ascending energies
    double zero_tol;
};

/// 1e-8 * (1 + ||H||_inf on the safe block): the threshold below which an
/// energy counts as zero and the gap threshold for degeneracy grouping.
double spectrum_zero_tol(const FssqmModel& model);

/// Spectrum from the closed forms: ground level at E = 0 with multiplicity
/// lambda(lambda-1)/2, excited levels E_n with multiplicity lambda.
/// Requires n_levels * lambda <= safe_dim.
SpectrumReport analytic_spectrum(const FssqmModel& model, int n_levels);

/// Independent route: groups the eigenvalues of H on the safe block
/// (cross-checked against a Jacobi eigensolve of the same matrix).
SpectrumReport numeric_spectrum(const FssqmModel& model, int n_levels);

/// Level-by-level agreement: energies within tol*(1+E), multiplicities exact.
bool spectra_match(const SpectrumReport& a, const SpectrumReport& b, double tol);

struct OrbitEntry {
    int member;        // index into the level's member list
    bool annihilated;  // Q kills this state
    int target;        // member index reached, -1 if annihilated
    Complex amplitude;
};

struct OrbitMap {
    int level;
    std::vector<OrbitEntry> actions;
};

/// How Q permutes the eigenstates of one level: cyclic on excited levels,
/// and on the ground level each state is annihilated or sent to another
/// ground state with an amplitude set by the f_i.
OrbitMap supercharge_orbit(const FssqmModel& model, int level);

enum class SectorClass {
    UnbrokenNondegenerate,
    UnbrokenDegenerate,
    BrokenZeroEnergy,
    BrokenPositiveEnergy,
};

std::string to_string(SectorClass c);

/// One irreducible sector (mu = 0..lambda-1) of the reduced model: operators
/// over a single Fock space, cross-checked against the diagonal blocks of
/// U (.) U', plus the ground-state data and symmetry classification.
struct SectorReport {
    int mu = 0;
    CMatrix H_mu, Q_mu, D_mu, tau_mu;
    std::vector<CMatrix> M_mu;
    SectorClass classification = SectorClass::UnbrokenNondegenerate;
    int ground_degeneracy = 0;
    double ground_energy = 0.0;
    std::vector<SpectrumLevel> levels;  // grouped sector spectrum, safe block
    double crosscheck_residual = 0.0;
};

SectorReport reduce_sector(const FssqmModel& model, int mu);

/// E^(mu)_m for m = 0..lambda*(k_max+1)-1 from the two-branch closed form.
/// Requires lambda*k_max + lambda <= safe_dim.
std::vector<double> sector_spectrum_formula(const FssqmModel& model, int mu, int k_max);

/// max_m |E^(mu)_m - H_mu(m,m)| / (1+E) over the safe block.
double sector_formula_residual(const FssqmModel& model, int mu);

/// Z_lambda-graded topological data: grade c_k, multiplicity m_k (all 1),
/// zero-mode count n0_k per grade, and Delta_ij = m_i n0_j - m_j n0_i.
struct TopologyReport {
    std::vector<Complex> grades;
    std::vector<int> multiplicities;
    std::vector<int> zero_mode_counts;
    std::vector<std::vector<int>> delta;
};

/// Full model: grade of block i is q^i; zero modes counted per block row of
/// H on the safe block via nullspace_dim.
TopologyReport topological_invariants(const FssqmModel& model);

/// Sector mu: the residue class F_nu carries grade q^{mu-nu+1}; zero modes
/// of H_mu counted per class on the safe block via nullspace_dim.
TopologyReport sector_invariants(const FssqmModel& model, int mu);

}  // namespace fssqm
