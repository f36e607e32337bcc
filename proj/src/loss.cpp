#include "qpac/loss.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qpac/errors.hpp"
#include "qpac/tolerances.hpp"

namespace qpac {

namespace {

double round_loss(double v) {
    const double scale = std::pow(10.0, tol::LOSS_ROUND_DECIMALS);
    return std::round(v * scale) / scale;
}

std::vector<int> sorted_unique(std::vector<int> labels) {
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    return labels;
}

} // namespace

LossFunction::LossFunction(std::vector<int> labels, std::map<std::pair<int, int>, double> table)
    : labels_(sorted_unique(std::move(labels))), table_(std::move(table)) {
    if (labels_.empty())
        throw ValidationError("LossFunction: empty label set");
    for (int y : labels_) {
        for (int yhat : labels_) {
            auto it = table_.find({y, yhat});
            if (it == table_.end())
                throw ValidationError("LossFunction: table is not fully populated");
            if (!(it->second >= 0.0 && it->second <= 1.0))
                throw ValidationError("LossFunction: values must lie in [0, 1]");
        }
    }
}

LossFunction LossFunction::zero_one(std::vector<int> labels) {
    std::map<std::pair<int, int>, double> table;
    for (int y : labels)
        for (int yhat : labels)
            table[{y, yhat}] = (y == yhat) ? 0.0 : 1.0;
    return LossFunction(std::move(labels), std::move(table));
}

LossFunction LossFunction::constant(std::vector<int> labels, double value) {
    std::map<std::pair<int, int>, double> table;
    for (int y : labels)
        for (int yhat : labels)
            table[{y, yhat}] = value;
    return LossFunction(std::move(labels), std::move(table));
}

double LossFunction::value(int true_label, int predicted_label) const {
    auto it = table_.find({true_label, predicted_label});
    if (it == table_.end())
        throw LabelDomainError("LossFunction: label pair outside the domain");
    return it->second;
}

std::vector<double> LossFunction::distinct_values() const {
    std::set<double> vals;
    for (int y : labels_)
        for (int yhat : labels_)
            vals.insert(round_loss(value(y, yhat)));
    return std::vector<double>(vals.begin(), vals.end());
}

std::size_t LossFunction::label_index(int label) const {
    auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
    if (it == labels_.end() || *it != label)
        throw LabelDomainError("LossFunction: unknown label");
    return static_cast<std::size_t>(it - labels_.begin());
}

Povm LossObservable::as_povm() const {
    // Outcome labels are the value indices; callers map back through `values`.
    std::vector<int> outcomes(values.size());
    for (std::size_t i = 0; i < outcomes.size(); ++i)
        outcomes[i] = static_cast<int>(i);
    return Povm(std::move(outcomes), operators);
}

LossObservable build_loss_observable(const Povm &m, const LossFunction &l,
                                     const std::vector<int> &labels) {
    std::vector<int> sorted_labels = labels;
    std::sort(sorted_labels.begin(), sorted_labels.end());
    std::vector<int> povm_labels = m.outcomes();
    std::sort(povm_labels.begin(), povm_labels.end());
    if (sorted_labels != l.labels() || povm_labels != l.labels())
        throw LabelDomainError("build_loss_observable: POVM, loss and label set must agree");

    const std::size_t state_dim = m.dim();
    const std::size_t label_count = l.labels().size();
    const std::size_t joint_dim = state_dim * label_count;
    const std::vector<double> values = l.distinct_values();
    const double scale = std::pow(10.0, tol::LOSS_ROUND_DECIMALS);

    std::vector<ComplexMatrix> ops(values.size(), ComplexMatrix(joint_dim, joint_dim));
    for (std::size_t yi = 0; yi < label_count; ++yi) {
        const int y = l.labels()[yi];
        for (std::size_t mi = 0; mi < m.size(); ++mi) {
            const int yhat = m.outcome(mi);
            const double z = std::round(l.value(y, yhat) * scale) / scale;
            const auto it = std::lower_bound(values.begin(), values.end(), z);
            const std::size_t zi = static_cast<std::size_t>(it - values.begin());
            // Add M_yhat into the (y, y) diagonal block.
            const ComplexMatrix &eff = m.effect(mi).matrix();
            ComplexMatrix &target = ops[zi];
            for (std::size_t r = 0; r < state_dim; ++r)
                for (std::size_t c = 0; c < state_dim; ++c)
                    target(r * label_count + yi, c * label_count + yi) += eff(r, c);
        }
    }

    LossObservable out;
    out.values = values;
    out.operators.reserve(ops.size());
    for (auto &op : ops)
        out.operators.emplace_back(std::move(op));
    return out;
}

HermitianOperator conditional_loss_operator(const Povm &m, const LossFunction &l, int y) {
    l.label_index(y); // validates the label
    ComplexMatrix acc(m.dim(), m.dim());
    for (std::size_t i = 0; i < m.size(); ++i)
        acc += m.effect(i).matrix().scaled(l.value(y, m.outcome(i)));
    return HermitianOperator(std::move(acc));
}

double expected_loss(const Povm &m, const LossFunction &l, const LabeledStateSource &source) {
    if (m.dim() != source.dim())
        throw DimensionError("expected_loss: POVM and source dimensions differ");
    std::map<int, ComplexMatrix> cond;
    std::vector<double> terms;
    terms.reserve(source.atoms().size());
    for (const SourceAtom &atom : source.atoms()) {
        auto it = cond.find(atom.label);
        if (it == cond.end())
            it = cond.emplace(atom.label,
                              conditional_loss_operator(m, l, atom.label).matrix())
                     .first;
        terms.push_back(atom.probability *
                        quadratic_form(it->second, atom.state.amplitudes().data()));
    }
    return pairwise_sum(terms);
}

} // namespace qpac
