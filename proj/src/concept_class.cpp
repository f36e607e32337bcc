#include "qpac/concept_class.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "qpac/errors.hpp"
#include "qpac/nnls.hpp"
#include "qpac/rng.hpp"
#include "qpac/tolerances.hpp"

namespace qpac {

using nlohmann::json;

ConceptClass::ConceptClass(std::vector<std::string> ids, std::vector<Povm> members)
    : ids_(std::move(ids)), members_(std::move(members)) {
    if (members_.empty() || ids_.size() != members_.size())
        throw ValidationError("ConceptClass: ids and members must be nonempty and match");
    const std::size_t d = members_.front().dim();
    std::vector<int> labels = members_.front().outcomes();
    std::sort(labels.begin(), labels.end());
    for (const Povm &m : members_) {
        if (m.dim() != d)
            throw DimensionError("ConceptClass: members have mixed dimensions");
        std::vector<int> other = m.outcomes();
        std::sort(other.begin(), other.end());
        if (other != labels)
            throw LabelDomainError("ConceptClass: members have mixed label sets");
    }
    std::set<std::string> seen(ids_.begin(), ids_.end());
    if (seen.size() != ids_.size())
        throw ValidationError("ConceptClass: duplicate ids");
}

std::size_t ConceptClass::index_of(const std::string &id) const {
    for (std::size_t i = 0; i < ids_.size(); ++i)
        if (ids_[i] == id)
            return i;
    throw ValidationError("ConceptClass: unknown id " + id);
}

std::vector<double> povm_to_vector(const Povm &m) {
    std::vector<double> out;
    const std::size_t d = m.dim();
    out.reserve(m.size() * d * d);
    for (std::size_t e = 0; e < m.size(); ++e) {
        const ComplexMatrix &eff = m.effect(e).matrix();
        for (std::size_t r = 0; r < d; ++r)
            out.push_back(eff(r, r).real());
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = r + 1; c < d; ++c) {
                out.push_back(eff(r, c).real());
                out.push_back(eff(r, c).imag());
            }
    }
    return out;
}

namespace {

double sup_distance(const std::vector<double> &a, const std::vector<double> &b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

struct HullTest {
    std::vector<std::size_t> support;
    std::vector<double> weights;
    double residual = 0; // sup norm over coordinates and the weight-sum row
};

// Best reproduction of `target` as a convex combination of `columns`.
HullTest convex_reproduction(const std::vector<const std::vector<double> *> &columns,
                             const std::vector<double> &target) {
    const std::size_t coord_count = target.size();
    const std::size_t rows = coord_count + 1; // one extra row pins sum(alpha)=1
    const std::size_t cols = columns.size();
    std::vector<double> a(rows * cols);
    for (std::size_t c = 0; c < cols; ++c) {
        for (std::size_t r = 0; r < coord_count; ++r)
            a[r * cols + c] = (*columns[c])[r];
        a[coord_count * cols + c] = 1.0;
    }
    std::vector<double> b = target;
    b.push_back(1.0);

    const NnlsResult fit = nnls(a, rows, cols, b);

    HullTest out;
    double sup = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < cols; ++c)
            acc += a[r * cols + c] * fit.x[c];
        sup = std::max(sup, std::abs(acc - b[r]));
    }
    out.residual = sup;
    for (std::size_t c = 0; c < cols; ++c)
        if (fit.x[c] > 1e-12) {
            out.support.push_back(c);
            out.weights.push_back(fit.x[c]);
        }
    return out;
}

} // namespace

ExtremePointSet extreme_points(const ConceptClass &c, double tolerance) {
    if (tolerance <= 0)
        throw RangeError("extreme_points: tolerance must be positive");
    const std::size_t n = c.size();
    std::vector<std::vector<double>> vecs(n);
    for (std::size_t i = 0; i < n; ++i)
        vecs[i] = povm_to_vector(c.member(i));

    ExtremePointSet out;
    out.parent_size = n;

    // Merge near-duplicates, keeping the first of each group.
    std::vector<std::size_t> unique_members;
    std::vector<std::optional<std::size_t>> duplicate_kept(n);
    for (std::size_t i = 0; i < n; ++i) {
        bool dup = false;
        for (std::size_t u : unique_members) {
            if (sup_distance(vecs[i], vecs[u]) < tolerance) {
                duplicate_kept[i] = u;
                out.duplicates.emplace_back(i, u);
                dup = true;
                break;
            }
        }
        if (!dup)
            unique_members.push_back(i);
    }

    // Per-member hull test against the other unique members.
    std::vector<bool> retained(unique_members.size(), true);
    std::vector<bool> flagged(unique_members.size(), false);
    for (std::size_t k = 0; k < unique_members.size(); ++k) {
        if (unique_members.size() == 1)
            break;
        std::vector<const std::vector<double> *> columns;
        std::vector<std::size_t> column_member;
        for (std::size_t j = 0; j < unique_members.size(); ++j) {
            if (j == k)
                continue;
            columns.push_back(&vecs[unique_members[j]]);
            column_member.push_back(unique_members[j]);
        }
        const HullTest fit = convex_reproduction(columns, vecs[unique_members[k]]);
        if (fit.residual < tolerance) {
            retained[k] = false;
        } else if (fit.residual < 10 * tolerance) {
            flagged[k] = true; // face-boundary case: keep it
        }
    }

    // Certificates must reference only retained members; members whose
    // reproduction fails against that smaller set get promoted back.
    for (bool changed = true; changed;) {
        changed = false;
        std::vector<const std::vector<double> *> columns;
        std::vector<std::size_t> column_unique_pos;
        for (std::size_t j = 0; j < unique_members.size(); ++j)
            if (retained[j]) {
                columns.push_back(&vecs[unique_members[j]]);
                column_unique_pos.push_back(j);
            }
        out.certificates.clear();
        for (std::size_t k = 0; k < unique_members.size(); ++k) {
            if (retained[k])
                continue;
            HullTest fit = convex_reproduction(columns, vecs[unique_members[k]]);
            if (fit.residual >= 10 * tolerance) {
                retained[k] = true;
                flagged[k] = true;
                changed = true;
                break;
            }
            ExtremeCertificate cert;
            cert.member_index = unique_members[k];
            cert.residual = fit.residual;
            for (std::size_t s = 0; s < fit.support.size(); ++s) {
                cert.support.push_back(unique_members[column_unique_pos[fit.support[s]]]);
                cert.weights.push_back(fit.weights[s]);
            }
            out.certificates.push_back(std::move(cert));
        }
        if (changed)
            continue;
        // Duplicates reproduce as weight 1 on their kept representative; if
        // that representative was itself dropped, reuse its certificate.
        for (const auto &[dropped, kept] : out.duplicates) {
            ExtremeCertificate cert;
            cert.member_index = dropped;
            const double dup_gap = sup_distance(vecs[dropped], vecs[kept]);
            const auto kept_pos = std::find(unique_members.begin(), unique_members.end(), kept);
            const std::size_t kept_k =
                static_cast<std::size_t>(kept_pos - unique_members.begin());
            if (retained[kept_k]) {
                cert.support.push_back(kept);
                cert.weights.push_back(1.0);
                cert.residual = dup_gap;
            } else {
                for (const ExtremeCertificate &other : out.certificates) {
                    if (other.member_index == kept) {
                        cert.support = other.support;
                        cert.weights = other.weights;
                        cert.residual = other.residual + dup_gap;
                        break;
                    }
                }
            }
            out.certificates.push_back(std::move(cert));
        }
    }

    for (std::size_t k = 0; k < unique_members.size(); ++k) {
        if (!retained[k])
            continue;
        out.member_indices.push_back(unique_members[k]);
        out.ids.push_back(c.id(unique_members[k]));
        if (flagged[k])
            out.boundary_flagged.push_back(unique_members[k]);
    }
    return out;
}

OptReductionReport verify_opt_reduction(const ConceptClass &c, const LossFunction &l,
                                        const LabeledStateSource &source,
                                        std::size_t combo_samples, std::uint64_t seed) {
    OptReductionReport report;
    double opt_class = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < c.size(); ++i)
        opt_class = std::min(opt_class, expected_loss(c.member(i), l, source));

    const ExtremePointSet star = extreme_points(c);
    double opt_extreme = std::numeric_limits<double>::infinity();
    for (std::size_t idx : star.member_indices)
        opt_extreme = std::min(opt_extreme, expected_loss(c.member(idx), l, source));

    report.opt_class = opt_class;
    report.opt_extreme = opt_extreme;
    report.combos_checked = combo_samples;

    std::vector<const Povm *> all;
    for (std::size_t i = 0; i < c.size(); ++i)
        all.push_back(&c.member(i));
    RngStream rng(seed, StreamDomain::MonteCarlo, 0xC0);
    double worst = 0.0;
    std::vector<double> weights(c.size());
    for (std::size_t t = 0; t < combo_samples; ++t) {
        double total = 0.0;
        for (double &w : weights) {
            w = -std::log(1.0 - rng.uniform01());
            total += w;
        }
        for (double &w : weights)
            w /= total;
        const Povm mixed = Povm::mix(all, weights);
        const double loss = expected_loss(mixed, l, source);
        worst = std::max(worst, opt_extreme - loss);
    }
    report.max_combo_shortfall = worst;
    report.pass = std::abs(opt_class - opt_extreme) <= 1e-9 && worst <= 1e-9;
    return report;
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

namespace {

Complex entry_from_json(const json &v) {
    if (v.is_array() && v.size() == 2)
        return Complex(v[0].get<double>(), v[1].get<double>());
    if (v.is_string()) {
        // "re,im" form
        const std::string s = v.get<std::string>();
        const auto comma = s.find(',');
        if (comma == std::string::npos)
            throw IoError("concept class file: malformed complex entry " + s);
        return Complex(std::stod(s.substr(0, comma)), std::stod(s.substr(comma + 1)));
    }
    if (v.is_number())
        return Complex(v.get<double>(), 0.0);
    throw IoError("concept class file: malformed complex entry");
}

} // namespace

ConceptClass load_concept_class(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("load_concept_class: cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception &e) {
        throw IoError(std::string("load_concept_class: invalid JSON: ") + e.what());
    }
    try {
        const std::size_t dim = doc.at("dim").get<std::size_t>();
        const std::vector<int> labels = doc.at("labels").get<std::vector<int>>();
        std::vector<std::string> ids;
        std::vector<Povm> members;
        for (const json &povm_doc : doc.at("povms")) {
            ids.push_back(povm_doc.at("id").get<std::string>());
            std::vector<HermitianOperator> effects;
            for (const json &eff : povm_doc.at("effects")) {
                if (eff.size() != dim * dim)
                    throw IoError("load_concept_class: effect entry count != dim^2");
                std::vector<Complex> entries;
                entries.reserve(dim * dim);
                for (const json &v : eff)
                    entries.push_back(entry_from_json(v));
                effects.emplace_back(ComplexMatrix(dim, dim, std::move(entries)));
            }
            members.emplace_back(labels, std::move(effects));
        }
        return ConceptClass(std::move(ids), std::move(members));
    } catch (const json::exception &e) {
        throw IoError(std::string("load_concept_class: schema error: ") + e.what());
    }
}

void save_concept_class(const std::string &path, const ConceptClass &c) {
    json doc;
    doc["dim"] = c.dim();
    doc["labels"] = c.labels();
    json povms = json::array();
    for (std::size_t i = 0; i < c.size(); ++i) {
        json entry;
        entry["id"] = c.id(i);
        json effects = json::array();
        for (const HermitianOperator &eff : c.member(i).effects()) {
            json flat = json::array();
            for (const Complex &z : eff.matrix().entries())
                flat.push_back(json::array({z.real(), z.imag()}));
            effects.push_back(std::move(flat));
        }
        entry["effects"] = std::move(effects);
        povms.push_back(std::move(entry));
    }
    doc["povms"] = std::move(povms);
    std::ofstream out(path);
    if (!out)
        throw IoError("save_concept_class: cannot open " + path);
    out << doc.dump(2) << '\n';
    if (!out)
        throw IoError("save_concept_class: write failed");
}

} // namespace qpac
