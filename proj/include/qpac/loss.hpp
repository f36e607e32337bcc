#pragma once

#include <map>
#include <utility>
#include <vector>

#include "qpac/complex_matrix.hpp"
#include "qpac/quantum_model.hpp"

namespace qpac {

/// Loss table over a finite label set, values in [0, 1]. Losses with a larger
/// natural range must be rescaled by the caller before construction.
class LossFunction {
  public:
    /// `table` maps (true label, predicted label) to a loss value and must be
    /// fully populated over labels x labels.
    LossFunction(std::vector<int> labels, std::map<std::pair<int, int>, double> table);

    static LossFunction zero_one(std::vector<int> labels);
    static LossFunction constant(std::vector<int> labels, double value);

    const std::vector<int> &labels() const { return labels_; }
    double value(int true_label, int predicted_label) const;

    /// The finite image set: distinct values after rounding to
    /// LOSS_ROUND_DECIMALS decimals, ascending.
    std::vector<double> distinct_values() const;

    /// Index of a label in the ordered label set; LabelDomainError if absent.
    std::size_t label_index(int label) const;

  private:
    std::vector<int> labels_; // sorted ascending
    std::map<std::pair<int, int>, double> table_;
};

/// POVM over loss values on the joint (state (x) label) space: one positive
/// operator per distinct loss value, summing to identity.
struct LossObservable {
    std::vector<double> values;              // sorted distinct loss values
    std::vector<HermitianOperator> operators; // same order as values

    /// POVM view for Born sampling of the loss value.
    Povm as_povm() const;
};

/// L_z = sum over (y, yhat) with loss value z of M_yhat (x) |y><y|.
LossObservable build_loss_observable(const Povm &m, const LossFunction &l,
                                     const std::vector<int> &labels);

/// Expected loss given the true label: sum_yhat l(y, yhat) M_yhat.
/// Sandwiched between 0 and I in the PSD order because losses sit in [0, 1].
HermitianOperator conditional_loss_operator(const Povm &m, const LossFunction &l, int y);

/// Exact expected loss over a finite-support source:
/// sum_atoms p * <phi| L_M(y) |phi>.
double expected_loss(const Povm &m, const LossFunction &l, const LabeledStateSource &source);

} // namespace qpac
