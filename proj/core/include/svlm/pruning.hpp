#pragma once

#include <map>
#include <set>
#include <string>

#include "svlm/datagen.hpp"
#include "svlm/matrix.hpp"
#include "svlm/model.hpp"

namespace svlm {

enum class ScoringMetric { Magnitude, GradientTimesWeight, Wanda };

const char* to_string(ScoringMetric m);
ScoringMetric metric_from_string(const std::string& s);

enum class ComparisonGroup { PerLayer, PerOutputRow, Global };

const char* to_string(ComparisonGroup g);
ComparisonGroup group_from_string(const std::string& s);

// Wanda ranks within output rows (its own convention); the others per layer.
ComparisonGroup default_group(ScoringMetric m);

// Where to place zeros given scores. Unstructured keeps the top
// ceil((1-ratio)*n) entries of each comparison group; NofM zeroes the n
// lowest-scoring entries of every aligned block of m along the input axis.
struct SparsitySpec {
    enum class Pattern { Unstructured, NofM };

    Pattern pattern = Pattern::Unstructured;
    double ratio = 0.0;    // Unstructured only
    std::size_t n = 0;     // NofM only
    std::size_t m = 0;     // NofM only
    ComparisonGroup group = ComparisonGroup::PerLayer;

    static SparsitySpec unstructured(double ratio, ComparisonGroup group = ComparisonGroup::PerLayer);
    static SparsitySpec n_of_m(std::size_t n, std::size_t m);

    void validate() const;
    // The sparsity this spec aims for (ratio, or n/m).
    double nominal_sparsity() const;
};

using ScoreMap = std::map<std::string, Matrix>;
using MaskMap = std::map<std::string, BitMask>;

// Importance scores for every prunable layer. A pure function of
// (w0, calibration): activations and gradients come from dense-teacher
// passes, so existing masks or adapters do not influence the result.
//   Magnitude           S = |w0|                        (calib ignored)
//   GradientTimesWeight S = |w0 (.) mean task gradient|
//   Wanda               S[i,j] = |w0[i,j]| * l2-norm of input feature j
//                       across all calibration passes
ScoreMap score(const ToyVlm& model, ScoringMetric metric, const SampleSet& calib);

// Single-matrix mask. Tie rule everywhere: order entries by (score
// descending, flat index ascending) and prune from the back, so equal
// scores survive lowest-index-first. Keep counts use
// ceil((1-ratio)*n - 1e-9); the epsilon makes decimal ratios behave as
// exact rationals. Group Global degenerates to PerLayer here.
BitMask build_mask(const Matrix& scores, const SparsitySpec& spec);

// Mask per layer; with ComparisonGroup::Global the unstructured keep-count
// is computed over all listed layers pooled together.
MaskMap build_masks(const ScoreMap& scores, const SparsitySpec& spec);

// Replace the masks of exactly the listed layers. Unknown, non-prunable or
// shape-mismatched entries are input errors; w0 is left untouched.
void apply_masks(ToyVlm& model, const MaskMap& masks);

// Fraction of exact zeros in the effective weights of the scoped layers.
double measured_sparsity(const ToyVlm& model, const std::set<Modality>& scope);

} // namespace svlm
