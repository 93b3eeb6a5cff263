#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "kreindil/metric.hpp"
#include "kreindil/operator_core.hpp"

namespace kreindil {

/// S_{α,θ} = {λ : |arg(λ − α)| ≥ π − θ} ∪ {α}, opening to the left.
struct Sector {
  double vertex = 0.0;
  double semi_angle = 0.0;

  void validate() const;
  bool contains(Complex lambda) const;
  /// True when λ lies within tol (in angle) of the boundary rays.
  bool on_boundary(Complex lambda, double tol = kBoundaryBand) const;

  static constexpr double kBoundaryBand = 1e-12;
};

/// Angular step for sampled sector tests.
inline constexpr double kSectorAngleStep = 3.14159265358979323846 / 1024.0;

struct SectorTest {
  bool contained = false;
  double margin = 0.0;  // worst λmax(Herm(e^{iψ}(A − α))); ≤ 0 when contained
  double worst_angle = 0.0;
};

/// ν(A) ⊆ S_{α,θ} via half-planes Re(e^{iψ}(λ − α)) ≤ 0, |ψ| ≤ π/2 − θ.
/// With use_metric the numerical range is taken in ⟨·,·⟩₀.
SectorTest check_numerical_range_in_sector(const OperatorSpec& spec, const Sector& sector,
                                           bool use_metric = false);

struct ResolventSample {
  double phi = 0.0;
  double sup_estimate = 0.0;  // estimate, not a bound
  Complex worst_lambda{};
};

struct SectorialityReport {
  double theta = 0.0;
  double beta = 0.0;
  bool nr_in_sector = false;  // in ⟨·,·⟩₀ when the metric was requested
  double nr_margin = 0.0;
  bool spectrum_in_sector = false;
  bool spectrum_indeterminate = false;  // an eigenvalue sits on the boundary band
  std::vector<ResolventSample> resolvent_sup;
  double dissipative_margin = 0.0;
  std::optional<double> metric_dissipative_margin;
  double holomorphy_semi_angle = 0.0;
  // Norm equivalence constants d, D of the metric, when present.
  std::optional<double> metric_lower;
  std::optional<double> metric_upper;
};

/// Spectrum of A − β against S_{0,θ} and sampled sup ‖λR(λ, A − β)‖ outside
/// S_{0,φ} for each φ. Also fills the dissipativity margins.
SectorialityReport check_sectorial(const OperatorSpec& spec, double beta, double theta,
                                   const std::vector<double>& phis, bool use_metric = false);

/// Default φ list for reports: a few angles strictly between θ and π.
std::vector<double> default_resolvent_angles(double theta);

/// λmax of Herm(A) − β, or of the pencil (Herm(M₀A) − βM₀, M₀).
double dissipative_margin(const OperatorSpec& spec, double beta, bool use_metric);

struct BetaSearch {
  bool feasible = false;
  double beta = 0.0;
  double upper_limit = 0.0;
  double margin_at_limit = 0.0;
};

inline constexpr double kBetaTolerance = 1e-8;

/// Smallest β ≥ 0 with ν(A) ⊆ S_{β,θ}, by bisection on [0, 10‖A‖].
BetaSearch find_beta(const OperatorSpec& spec, double theta, bool use_metric = false);

/// A random instance satisfying the sectoriality and (metric) dissipativity
/// hypotheses by construction. Bit-reproducible for a fixed seed.
OperatorSpec generate_instance(Index dim, double theta, double beta, bool with_metric,
                               std::uint64_t seed);

// Sampled consequences of the hypotheses.

/// max over λ of ‖R(λ,B)‖·Re λ for random Re λ > 0 (≤ 1 for dissipative B).
double resolvent_contraction_ratio(const OperatorSpec& spec, int samples, std::uint64_t seed);

/// max over t of ‖T(t)‖/e^{βt}, in the metric operator norm if requested.
double growth_ratio(const OperatorSpec& spec, double beta, const std::vector<double>& times,
                    bool use_metric);

/// max ‖e^{z(A−β)}‖ over random z with |arg z| ≤ π/2 − θ − 0.05.
double holomorphic_contraction(const OperatorSpec& spec, double beta, double theta, int samples,
                               std::uint64_t seed, bool use_metric);

}  // namespace kreindil
