#include "qpac/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include <Eigen/Dense>

#include "qpac/errors.hpp"
#include "qpac/pauli.hpp"

namespace qpac {

PureState random_pure_state(std::size_t dim, RngStream &rng) {
    std::vector<Complex> amps(dim);
    double norm2 = 0.0;
    for (Complex &a : amps) {
        a = Complex(rng.gaussian(), rng.gaussian());
        norm2 += std::norm(a);
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (Complex &a : amps)
        a *= inv;
    return PureState(std::move(amps));
}

ComplexMatrix random_unitary(std::size_t dim, RngStream &rng) {
    Eigen::MatrixXcd g(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c)
            g(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                Complex(rng.gaussian(), rng.gaussian());
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phase convention so the distribution is Haar.
    for (std::size_t c = 0; c < dim; ++c) {
        const Complex d = r(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c));
        const Complex phase = std::abs(d) > 0 ? d / std::abs(d) : Complex(1, 0);
        q.col(static_cast<Eigen::Index>(c)) *= phase;
    }
    ComplexMatrix out(dim, dim);
    for (std::size_t r2 = 0; r2 < dim; ++r2)
        for (std::size_t c = 0; c < dim; ++c)
            out(r2, c) = q(static_cast<Eigen::Index>(r2), static_cast<Eigen::Index>(c));
    return out;
}

HermitianOperator random_hermitian(std::size_t dim, RngStream &rng) {
    ComplexMatrix m(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
        m(r, r) = Complex(rng.gaussian(), 0.0);
        for (std::size_t c = r + 1; c < dim; ++c) {
            const Complex z(rng.gaussian(), rng.gaussian());
            m(r, c) = z;
            m(c, r) = std::conj(z);
        }
    }
    return HermitianOperator(std::move(m));
}

HermitianOperator random_k_local_hermitian(int qubits, int k, RngStream &rng) {
    if (k < 0 || k > qubits)
        throw RangeError("random_k_local_hermitian: k must be in 0..qubits");
    if (k == 0) {
        ComplexMatrix m = ComplexMatrix::identity(std::size_t{1} << qubits);
        return HermitianOperator(m.scaled(Complex(rng.gaussian(), 0.0)));
    }
    // Random ascending support of size k.
    std::vector<int> all(static_cast<std::size_t>(qubits));
    for (int q = 0; q < qubits; ++q)
        all[static_cast<std::size_t>(q)] = q;
    for (std::size_t i = all.size(); i > 1; --i)
        std::swap(all[i - 1], all[rng.uniform_index(i)]);
    std::vector<int> support(all.begin(), all.begin() + k);
    std::sort(support.begin(), support.end());

    const HermitianOperator local = random_hermitian(std::size_t{1} << k, rng);
    return HermitianOperator(embed_operator(local.matrix(), support, qubits));
}

Povm random_projective_povm(std::size_t dim, const std::vector<int> &labels, RngStream &rng) {
    if (labels.empty() || labels.size() > dim)
        throw RangeError("random_projective_povm: need 1..dim labels");
    const ComplexMatrix u = random_unitary(dim, rng);
    const std::size_t per = dim / labels.size();
    std::vector<HermitianOperator> effects;
    for (std::size_t g = 0; g < labels.size(); ++g) {
        const std::size_t first = g * per;
        const std::size_t last = (g + 1 == labels.size()) ? dim : first + per;
        ComplexMatrix eff(dim, dim);
        std::vector<Complex> col(dim);
        for (std::size_t c = first; c < last; ++c) {
            for (std::size_t r = 0; r < dim; ++r)
                col[r] = u(r, c);
            eff.add_outer_product(col.data(), 1.0);
        }
        effects.emplace_back(std::move(eff));
    }
    return Povm(labels, std::move(effects));
}

LossFunction random_loss(const std::vector<int> &labels, RngStream &rng) {
    std::map<std::pair<int, int>, double> table;
    for (int y : labels)
        for (int yhat : labels)
            table[{y, yhat}] = rng.uniform01();
    return LossFunction(labels, std::move(table));
}

namespace {

std::string concept_id(std::size_t index, std::size_t count) {
    int width = 2;
    for (std::size_t c = count; c > 100; c /= 10)
        ++width;
    char buf[24];
    std::snprintf(buf, sizeof(buf), "c%0*d", width, static_cast<int>(index));
    return buf;
}

} // namespace

LearningTask make_state_discrimination(int qubits, std::size_t class_size, double label_noise,
                                       std::uint64_t seed) {
    if (qubits < 1 || qubits > 6)
        throw RangeError("make_state_discrimination: qubits must be in 1..6");
    if (class_size < 2)
        throw RangeError("make_state_discrimination: need at least two concepts");
    if (!(label_noise >= 0.0 && label_noise < 0.5))
        throw RangeError("make_state_discrimination: label_noise must be in [0, 0.5)");
    const std::size_t dim = std::size_t{1} << qubits;
    const PureState phi0 = PureState::basis_state(dim, 0);
    const PureState phi1 = PureState::basis_state(dim, dim - 1);

    std::vector<SourceAtom> atoms;
    if (label_noise == 0.0) {
        atoms = {{0.5, phi0, 0}, {0.5, phi1, 1}};
    } else {
        atoms = {{0.5 * (1.0 - label_noise), phi0, 0},
                 {0.5 * label_noise, phi0, 1},
                 {0.5 * (1.0 - label_noise), phi1, 1},
                 {0.5 * label_noise, phi1, 0}};
    }
    LabeledStateSource source(std::move(atoms), seed);

    // Perfect and swapped projective measurements; leftover space split
    // evenly so the effects complete to identity.
    ComplexMatrix p0 = phi0.projector();
    ComplexMatrix p1 = phi1.projector();
    ComplexMatrix rest = ComplexMatrix::identity(dim) - p0 - p1;
    const ComplexMatrix half_rest = rest.scaled(0.5);
    const Povm perfect({0, 1}, {HermitianOperator(p0 + half_rest),
                                HermitianOperator(p1 + half_rest)});
    const Povm swapped({0, 1}, {HermitianOperator(p1 + half_rest),
                                HermitianOperator(p0 + half_rest)});

    std::vector<std::string> ids;
    std::vector<Povm> members;
    for (std::size_t j = 0; j < class_size; ++j) {
        ids.push_back(concept_id(j, class_size));
        if (j == 0) {
            members.push_back(perfect);
        } else if (j + 1 == class_size) {
            members.push_back(swapped);
        } else {
            const double alpha =
                static_cast<double>(j) / static_cast<double>(class_size - 1);
            members.push_back(Povm::mix({&perfect, &swapped}, {1.0 - alpha, alpha}));
        }
    }

    std::vector<int> labels{0, 1};
    return LearningTask{ConceptClass(std::move(ids), std::move(members)), std::move(source),
                        LossFunction::zero_one(labels), labels};
}

LearningTask make_random_projective_class(int qubits, std::size_t class_size,
                                          std::size_t atom_count, std::uint64_t seed) {
    if (qubits < 1 || qubits > 6)
        throw RangeError("make_random_projective_class: qubits must be in 1..6");
    if (class_size < 1 || atom_count < 1)
        throw RangeError("make_random_projective_class: class and atoms must be nonempty");
    const std::size_t dim = std::size_t{1} << qubits;
    const std::vector<int> labels{0, 1};
    RngStream rng(seed, StreamDomain::TaskBuild, 0);

    std::vector<std::string> ids;
    std::vector<Povm> members;
    for (std::size_t j = 0; j < class_size; ++j) {
        ids.push_back(concept_id(j, class_size));
        members.push_back(random_projective_povm(dim, labels, rng));
    }

    std::vector<SourceAtom> atoms;
    for (std::size_t a = 0; a < atom_count; ++a)
        atoms.push_back(SourceAtom{1.0 / static_cast<double>(atom_count),
                                   random_pure_state(dim, rng),
                                   static_cast<int>(rng.uniform_index(2))});
    LabeledStateSource source(std::move(atoms), seed);

    return LearningTask{ConceptClass(std::move(ids), std::move(members)), std::move(source),
                        LossFunction::zero_one(labels), labels};
}

} // namespace qpac
