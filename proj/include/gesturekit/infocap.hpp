#ifndef GESTUREKIT_INFOCAP_HPP
#define GESTUREKIT_INFOCAP_HPP

#include "gesturekit/autoregressive.hpp"
#include "gesturekit/pca.hpp"
#include "gesturekit/trace.hpp"
#include "gesturekit/warping.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <span>
#include <stdexcept>
#include <vector>

namespace gesturekit {

struct MiConfig {
  double mse_cutoff_fraction = 0.05;
  double r2_clamp = 1.0 - 1e-6;
  /// Gaussian sigma (frames) applied to the projections before alignment only.
  double alignment_smoothing_frames = 4.0;
};

struct ComponentMi {
  Eigen::Index component_index = 0;
  Eigen::Index n_effective = 0;
  double pearson_r = 0.0;
  double bits = 0.0;
};

/// Estimated mutual information between two repetitions, in bits.
struct MiResult {
  /// Finger counts differ; no estimate exists (not the same as 0 bits).
  bool incomparable = false;
  double total_bits = 0.0;
  Eigen::Index retained_k = 0;
  std::vector<ComponentMi> per_component;
};

/// Raised when a pair leaves too few aligned residual pairs to estimate from.
class InsufficientDataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr Eigen::Index kMinFrames = 8;
inline constexpr Eigen::Index kMinEffectivePairs = 4;

/// Frames x [f1.x, f1.y, f2.x, f2.y, ...].
Eigen::MatrixXd to_feature_matrix(const ResampledTrace& trace);

/// Subtracts the column means and divides by the root mean squared row norm,
/// so the result is unchanged by translation or uniform scaling of the input.
Eigen::MatrixXd standardize_features(const Eigen::MatrixXd& features);

/// Sample Pearson correlation; 0 when either side has no variance.
double pearson(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y);

/// Bias-corrected Gaussian MI for n pairs with correlation r, before clamping or flooring.
double gaussian_mi_bits(double r, Eigen::Index n);

MiResult mutual_information(const ResampledTrace& a, const ResampledTrace& b, const MiConfig& config = {});

struct PairMi {
  std::size_t first = 0;
  std::size_t second = 0;
  MiResult result;
};

struct GroupMi {
  double mean_bits = 0.0;
  std::vector<PairMi> pairs;
  std::size_t incomparable_pairs = 0;
};

/// Mean total bits over all unordered pairs; incomparable pairs are excluded and counted.
GroupMi group_mean_mi(std::span<const ResampledTrace> traces, const MiConfig& config = {});

/// Mean total bits over the Cartesian pairing a x b.
GroupMi cross_group_mi(std::span<const ResampledTrace> a, std::span<const ResampledTrace> b,
                       const MiConfig& config = {});

/// cross_group_mi(generate, recall).mean / group_mean_mi(generate).mean
double memorability_ratio(std::span<const ResampledTrace> generate, std::span<const ResampledTrace> recall,
                          const MiConfig& config = {});

nlohmann::json to_json(const MiResult& result);
MiResult mi_result_from_json(const nlohmann::json& doc);

}  // namespace gesturekit

#endif  // GESTUREKIT_INFOCAP_HPP
