#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qpac/loss.hpp"
#include "qpac/quantum_model.hpp"

namespace qpac {

/// Finite family of POVMs over one space and label set, with stable ids.
class ConceptClass {
  public:
    ConceptClass(std::vector<std::string> ids, std::vector<Povm> members);

    std::size_t size() const { return members_.size(); }
    std::size_t dim() const { return members_.front().dim(); }
    const std::vector<std::string> &ids() const { return ids_; }
    const std::vector<Povm> &members() const { return members_; }
    const Povm &member(std::size_t i) const { return members_[i]; }
    const std::string &id(std::size_t i) const { return ids_[i]; }
    std::size_t index_of(const std::string &id) const;
    const std::vector<int> &labels() const { return members_.front().outcomes(); }

  private:
    std::vector<std::string> ids_;
    std::vector<Povm> members_;
};

/// Convex-combination certificate for a member dropped by the extremality
/// test: the weights over the retained members that reproduce it.
struct ExtremeCertificate {
    std::size_t member_index;            // index in the parent class
    std::vector<std::size_t> support;    // retained-member indices
    std::vector<double> weights;         // same length as support
    double residual;                     // sup-norm reproduction residual
};

/// Extreme points of the convex closure of a finite class, as a sublist of
/// the parent (after near-duplicate merging).
struct ExtremePointSet {
    std::vector<std::size_t> member_indices; // into the parent class
    std::vector<std::string> ids;
    std::size_t parent_size = 0;
    std::vector<ExtremeCertificate> certificates;            // one per dropped member
    std::vector<std::pair<std::size_t, std::size_t>> duplicates; // (dropped, kept)
    std::vector<std::size_t> boundary_flagged;               // retained but near-feasible

    std::size_t size() const { return member_indices.size(); }
};

/// Real coordinates of a POVM: for each effect, the diagonal (real) entries
/// followed by the real and imaginary parts of the above-diagonal entries,
/// row by row; effects concatenated in outcome order. Pure projection of
/// entries, so affine combinations map exactly to affine combinations.
std::vector<double> povm_to_vector(const Povm &m);

/// Extreme points of conv(class): member i is kept unless it is a convex
/// combination of the other members within `tolerance` (sup norm). Members
/// whose best reproduction lands in [tolerance, 10*tolerance) are kept and
/// flagged. Certificates of dropped members are re-solved against the
/// retained set and verified below 10*tolerance.
ExtremePointSet extreme_points(const ConceptClass &c, double tolerance = 1e-9);

struct OptReductionReport {
    double opt_class = 0;
    double opt_extreme = 0;
    double max_combo_shortfall = 0; // how far any sampled mixture beat opt_extreme
    std::size_t combos_checked = 0;
    bool pass = false;
};

/// Checks that minimizing expected loss over the class, over its extreme
/// points, and over random convex combinations all agree.
OptReductionReport verify_opt_reduction(const ConceptClass &c, const LossFunction &l,
                                        const LabeledStateSource &source,
                                        std::size_t combo_samples = 1000,
                                        std::uint64_t seed = 7);

/// JSON file schema: {"dim": d, "labels": [...], "povms": [{"id": ...,
/// "effects": [[[re, im], ...], ...]}]} with row-major effect entries.
ConceptClass load_concept_class(const std::string &path);
void save_concept_class(const std::string &path, const ConceptClass &c);

} // namespace qpac
