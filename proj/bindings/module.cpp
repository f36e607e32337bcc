#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qpac/experiment.hpp"
#include "qpac/qsrm.hpp"
#include "qpac/shadow.hpp"
#include "qpac/shadow_norm.hpp"
#include "qpac/tasks.hpp"
#include "qpac/version.hpp"

namespace py = pybind11;
using namespace qpac;

namespace {

ComplexMatrix matrix_from_numpy(const py::array_t<std::complex<double>> &array) {
    const py::buffer_info info = array.request();
    if (info.ndim != 2)
        throw DimensionError("expected a 2-d complex array");
    const auto rows = static_cast<std::size_t>(info.shape[0]);
    const auto cols = static_cast<std::size_t>(info.shape[1]);
    std::vector<Complex> entries(rows * cols);
    const auto row_stride = static_cast<std::size_t>(info.strides[0]) / sizeof(Complex);
    const auto col_stride = static_cast<std::size_t>(info.strides[1]) / sizeof(Complex);
    const auto *data = static_cast<const Complex *>(info.ptr);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            entries[r * cols + c] = data[r * row_stride + c * col_stride];
    return ComplexMatrix(rows, cols, std::move(entries));
}

py::array_t<std::complex<double>> numpy_from_matrix(const ComplexMatrix &m) {
    py::array_t<std::complex<double>> out({m.rows(), m.cols()});
    auto buf = out.mutable_unchecked<2>();
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            buf(static_cast<py::ssize_t>(r), static_cast<py::ssize_t>(c)) = m(r, c);
    return out;
}

PureState state_from_numpy(const py::array_t<std::complex<double>> &array) {
    const py::buffer_info info = array.request();
    if (info.ndim != 1)
        throw DimensionError("expected a 1-d complex array");
    const auto n = static_cast<std::size_t>(info.shape[0]);
    const auto stride = static_cast<std::size_t>(info.strides[0]) / sizeof(Complex);
    const auto *data = static_cast<const Complex *>(info.ptr);
    std::vector<Complex> amps(n);
    for (std::size_t i = 0; i < n; ++i)
        amps[i] = data[i * stride];
    return PureState(std::move(amps));
}

/// Owner of move-only samples so Python callers can pass them to learners.
struct SampleBatch {
    SampleBatch() = default;
    SampleBatch(const SampleBatch &) = delete;
    SampleBatch &operator=(const SampleBatch &) = delete;
    SampleBatch(SampleBatch &&) = default;
    SampleBatch &operator=(SampleBatch &&) = default;

    std::vector<LabeledSample> items;

    std::size_t size() const { return items.size(); }
    std::vector<int> labels() const {
        std::vector<int> out;
        out.reserve(items.size());
        for (const LabeledSample &s : items)
            out.push_back(s.label());
        return out;
    }
    std::size_t consumed_count() const {
        std::size_t c = 0;
        for (const LabeledSample &s : items)
            c += s.consumed() ? 1 : 0;
        return c;
    }
};

LossFunction loss_from_dict(const std::vector<int> &labels, const py::dict &table) {
    std::map<std::pair<int, int>, double> entries;
    for (const auto &item : table) {
        const auto key = item.first.cast<std::pair<int, int>>();
        entries[key] = item.second.cast<double>();
    }
    return LossFunction(labels, std::move(entries));
}

} // namespace

PYBIND11_MODULE(_qpac, m) {
    m.doc() = "Classical-shadow learning of quantum measurement classes";
    m.attr("__version__") = QPAC_VERSION;

    py::register_exception<Error>(m, "QpacError");

    py::class_<HermitianOperator>(m, "HermitianOperator")
        .def(py::init([](const py::array_t<std::complex<double>> &array) {
                 return HermitianOperator(matrix_from_numpy(array));
             }),
             py::arg("matrix"))
        .def_property_readonly("dim", &HermitianOperator::dim)
        .def("to_numpy", [](const HermitianOperator &h) { return numpy_from_matrix(h.matrix()); });

    m.def("max_eigenvalue", &max_eigenvalue);
    m.def("min_eigenvalue", &min_eigenvalue);
    m.def("tensor_product", [](const py::array_t<std::complex<double>> &a,
                               const py::array_t<std::complex<double>> &b) {
        return numpy_from_matrix(tensor_product(matrix_from_numpy(a), matrix_from_numpy(b)));
    });
    m.def("trace_product", [](const py::array_t<std::complex<double>> &a,
                              const py::array_t<std::complex<double>> &b) {
        return trace_product(matrix_from_numpy(a), matrix_from_numpy(b));
    });

    py::class_<PureState>(m, "PureState")
        .def(py::init(&state_from_numpy), py::arg("amplitudes"))
        .def_property_readonly("dim", &PureState::dim)
        .def("to_numpy", [](const PureState &s) {
            py::array_t<std::complex<double>> out(s.dim());
            auto buf = out.mutable_unchecked<1>();
            for (std::size_t i = 0; i < s.dim(); ++i)
                buf(static_cast<py::ssize_t>(i)) = s.amplitudes()[i];
            return out;
        });

    py::class_<DensityOperator>(m, "DensityOperator")
        .def(py::init([](const py::array_t<std::complex<double>> &array) {
                 return DensityOperator(HermitianOperator(matrix_from_numpy(array)));
             }),
             py::arg("matrix"))
        .def_static("from_pure", &DensityOperator::from_pure)
        .def_property_readonly("dim", &DensityOperator::dim)
        .def("to_numpy", [](const DensityOperator &r) { return numpy_from_matrix(r.matrix()); });

    py::class_<Povm>(m, "Povm")
        .def(py::init([](const std::vector<int> &outcomes,
                         const std::vector<py::array_t<std::complex<double>>> &effects) {
                 std::vector<HermitianOperator> ops;
                 ops.reserve(effects.size());
                 for (const auto &e : effects)
                     ops.emplace_back(matrix_from_numpy(e));
                 return Povm(outcomes, std::move(ops));
             }),
             py::arg("outcomes"), py::arg("effects"))
        .def_property_readonly("dim", &Povm::dim)
        .def_property_readonly("outcomes", &Povm::outcomes)
        .def("effect", [](const Povm &p, std::size_t i) {
            return numpy_from_matrix(p.effect(i).matrix());
        });

    py::class_<LabeledStateSource>(m, "LabeledStateSource")
        .def(py::init([](const std::vector<std::tuple<double, PureState, int>> &atoms,
                         std::uint64_t seed) {
                 std::vector<SourceAtom> list;
                 list.reserve(atoms.size());
                 for (const auto &[p, state, label] : atoms)
                     list.push_back(SourceAtom{p, state, label});
                 return LabeledStateSource(std::move(list), seed);
             }),
             py::arg("atoms"), py::arg("seed"))
        .def_property_readonly("dim", &LabeledStateSource::dim)
        .def_property_readonly("labels", &LabeledStateSource::labels);

    py::class_<SampleBatch>(m, "SampleBatch")
        .def("__len__", &SampleBatch::size)
        .def_property_readonly("labels", &SampleBatch::labels)
        .def_property_readonly("consumed_count", &SampleBatch::consumed_count);

    m.def(
        "draw_samples",
        [](const LabeledStateSource &source, std::size_t n, std::optional<std::uint64_t> seed) {
            SampleBatch batch;
            batch.items = seed ? draw_samples(source, n, *seed) : draw_samples(source, n);
            return batch;
        },
        py::arg("source"), py::arg("n"), py::arg("seed") = std::nullopt);

    m.def(
        "born_measure",
        [](const Povm &m_, const DensityOperator &rho, std::uint64_t seed, std::uint64_t index) {
            RngStream rng(seed, StreamDomain::BornMeasure, index);
            return born_measure(m_, rho, rng);
        },
        py::arg("povm"), py::arg("rho"), py::arg("seed"), py::arg("index") = 0);

    m.def("joint_state", &joint_state, py::arg("source"), py::arg("label_count") = 0);

    py::class_<LossFunction>(m, "LossFunction")
        .def(py::init(&loss_from_dict), py::arg("labels"), py::arg("table"))
        .def_static("zero_one", &LossFunction::zero_one)
        .def_static("constant", &LossFunction::constant)
        .def_property_readonly("labels", &LossFunction::labels)
        .def("value", &LossFunction::value)
        .def("distinct_values", &LossFunction::distinct_values);

    m.def("conditional_loss_operator", [](const Povm &m_, const LossFunction &l, int y) {
        return numpy_from_matrix(conditional_loss_operator(m_, l, y).matrix());
    });
    m.def("expected_loss", &expected_loss);
    m.def("build_loss_observable",
          [](const Povm &m_, const LossFunction &l, const std::vector<int> &labels) {
              const LossObservable obs = build_loss_observable(m_, l, labels);
              std::vector<py::array_t<std::complex<double>>> ops;
              for (const HermitianOperator &op : obs.operators)
                  ops.push_back(numpy_from_matrix(op.matrix()));
              return py::make_tuple(obs.values, ops);
          });

    py::enum_<EnsembleKind>(m, "EnsembleKind")
        .value("PAULI", EnsembleKind::PauliTensor)
        .value("CLIFFORD_EXACT", EnsembleKind::CliffordExact)
        .value("CLIFFORD_SAMPLED", EnsembleKind::CliffordSampled)
        .value("CUSTOM", EnsembleKind::Custom);

    py::class_<UnitaryEnsemble>(m, "UnitaryEnsemble")
        .def_static("pauli_tensor", &UnitaryEnsemble::pauli_tensor, py::arg("qubits"))
        .def_static("clifford_exact", &UnitaryEnsemble::clifford_exact, py::arg("qubits"))
        .def_static("clifford_sampled", &UnitaryEnsemble::clifford_sampled, py::arg("qubits"))
        .def_static(
            "custom",
            [](std::size_t dim,
               const std::vector<std::pair<double, py::array_t<std::complex<double>>>> &members,
               bool require_complete) {
                std::vector<std::pair<double, ComplexMatrix>> list;
                list.reserve(members.size());
                for (const auto &[w, u] : members)
                    list.emplace_back(w, matrix_from_numpy(u));
                return UnitaryEnsemble::custom(dim, std::move(list), require_complete);
            },
            py::arg("dim"), py::arg("members"), py::arg("require_complete") = true)
        .def_property_readonly("kind", &UnitaryEnsemble::kind)
        .def_property_readonly("dim", &UnitaryEnsemble::dim)
        .def_property_readonly("qubits", &UnitaryEnsemble::qubits)
        .def_property_readonly("complete", &UnitaryEnsemble::complete)
        .def_property_readonly("enumerable", &UnitaryEnsemble::enumerable);

    m.def("gamma_apply", [](const UnitaryEnsemble &ens,
                            const py::array_t<std::complex<double>> &o) {
        return numpy_from_matrix(gamma_apply(ens, matrix_from_numpy(o)));
    });
    m.def("gamma_inverse", [](const UnitaryEnsemble &ens,
                              const py::array_t<std::complex<double>> &o) {
        return numpy_from_matrix(gamma_inverse(ens, matrix_from_numpy(o)));
    });

    py::class_<ShadowSnapshot>(m, "ShadowSnapshot")
        .def_readonly("unitary_id", &ShadowSnapshot::unitary_id)
        .def_readonly("outcome", &ShadowSnapshot::outcome);

    py::class_<ClassicalShadow>(m, "ClassicalShadow")
        .def_readonly("snapshot", &ClassicalShadow::snapshot)
        .def_readonly("label", &ClassicalShadow::label)
        .def("to_numpy",
             [](const ClassicalShadow &s) { return numpy_from_matrix(s.matrix.matrix()); });

    py::class_<ShadowDataset>(m, "ShadowDataset")
        .def("__len__", [](const ShadowDataset &ds) { return ds.shadows.size(); })
        .def("shadow", [](const ShadowDataset &ds, std::size_t i) -> const ClassicalShadow & {
            return ds.shadows.at(i);
        }, py::return_value_policy::reference_internal);

    m.def(
        "generate_dataset",
        [](const UnitaryEnsemble &ens, SampleBatch &batch, std::uint64_t seed, unsigned threads) {
            return generate_dataset(ens, batch.items, seed, threads);
        },
        py::arg("ensemble"), py::arg("samples"), py::arg("seed"), py::arg("threads") = 1);

    m.def("shadow_loss_single", &shadow_loss_single);
    m.def("shadow_empirical_loss", &shadow_empirical_loss);
    m.def("save_shadow_dataset", &save_shadow_dataset);
    m.def("load_shadow_dataset", &load_shadow_dataset);

    m.def("shadow_norm", [](const UnitaryEnsemble &ens,
                            const py::array_t<std::complex<double>> &o) {
        return shadow_norm(ens, HermitianOperator(matrix_from_numpy(o)));
    });
    m.def(
        "shadow_norm_monte_carlo",
        [](const UnitaryEnsemble &ens, const py::array_t<std::complex<double>> &o,
           std::size_t samples, std::uint64_t seed) {
            RngStream rng(seed, StreamDomain::MonteCarlo, 0);
            double se = 0.0;
            const double value =
                shadow_norm_monte_carlo(ens, HermitianOperator(matrix_from_numpy(o)), samples,
                                        rng, &se);
            return py::make_tuple(value, se);
        },
        py::arg("ensemble"), py::arg("operator"), py::arg("samples"), py::arg("seed"));
    m.def("shadow_estimator_variance",
          [](const UnitaryEnsemble &ens, const py::array_t<std::complex<double>> &o,
             const DensityOperator &rho) {
              return shadow_estimator_variance(ens, HermitianOperator(matrix_from_numpy(o)), rho);
          });

    py::class_<ConceptClass>(m, "ConceptClass")
        .def(py::init<std::vector<std::string>, std::vector<Povm>>(), py::arg("ids"),
             py::arg("members"))
        .def_property_readonly("size", &ConceptClass::size)
        .def_property_readonly("dim", &ConceptClass::dim)
        .def_property_readonly("ids", &ConceptClass::ids)
        .def("member", &ConceptClass::member, py::return_value_policy::reference_internal);

    py::class_<ExtremePointSet>(m, "ExtremePointSet")
        .def_readonly("ids", &ExtremePointSet::ids)
        .def_readonly("member_indices", &ExtremePointSet::member_indices)
        .def_readonly("parent_size", &ExtremePointSet::parent_size)
        .def_property_readonly("size", &ExtremePointSet::size);

    m.def("povm_to_vector", &povm_to_vector);
    m.def("extreme_points", &extreme_points, py::arg("concept_class"), py::arg("tol") = 1e-9);
    m.def(
        "verify_opt_reduction",
        [](const ConceptClass &c, const LossFunction &l, const LabeledStateSource &source,
           std::size_t combos, std::uint64_t seed) {
            const OptReductionReport r = verify_opt_reduction(c, l, source, combos, seed);
            py::dict out;
            out["opt_class"] = r.opt_class;
            out["opt_extreme"] = r.opt_extreme;
            out["max_combo_shortfall"] = r.max_combo_shortfall;
            out["pass"] = r.pass;
            return out;
        },
        py::arg("concept_class"), py::arg("loss"), py::arg("source"), py::arg("combos") = 1000,
        py::arg("seed") = 7);
    m.def("load_concept_class", &load_concept_class);
    m.def("save_concept_class", &save_concept_class);

    m.def("class_constant_v", &class_constant_v);

    m.def(
        "verify_concentration",
        [](const UnitaryEnsemble &ens, const LabeledStateSource &source, const Povm &m_,
           const LossFunction &l, std::size_t n, double epsilon, std::size_t trials,
           std::uint64_t seed, unsigned threads) {
            const ConcentrationReport r =
                verify_concentration(ens, source, m_, l, n, epsilon, trials, seed, threads);
            py::dict out;
            out["n"] = r.n;
            out["epsilon"] = r.epsilon;
            out["trials"] = r.trials;
            out["exact_loss"] = r.exact_loss;
            out["max_variance"] = r.max_variance;
            out["bound"] = r.bound;
            out["empirical_exceedance"] = r.empirical_exceedance;
            out["binomial_slack"] = r.binomial_slack;
            out["epsilon_in_valid_range"] = r.epsilon_in_valid_range;
            out["pass"] = r.pass;
            return out;
        },
        py::arg("ensemble"), py::arg("source"), py::arg("povm"), py::arg("loss"), py::arg("n"),
        py::arg("epsilon"), py::arg("trials"), py::arg("seed"), py::arg("threads") = 1);

    py::class_<LearnerOutput>(m, "LearnerOutput")
        .def_readonly("chosen_id", &LearnerOutput::chosen_id)
        .def_readonly("empirical_losses", &LearnerOutput::empirical_losses)
        .def_readonly("n_used", &LearnerOutput::n_used)
        .def_readonly("seed", &LearnerOutput::seed);

    py::enum_<LearnerKind>(m, "LearnerKind")
        .value("QSRM", LearnerKind::Qsrm)
        .value("NAIVE_QERM", LearnerKind::NaiveQerm);

    m.def(
        "qsrm_learn",
        [](const ConceptClass &parent, const ExtremePointSet &cstar, SampleBatch &batch,
           const UnitaryEnsemble &ens, const LossFunction &l, std::uint64_t seed,
           unsigned threads) {
            return qsrm_learn(parent, cstar, batch.items, ens, l, seed, threads);
        },
        py::arg("concept_class"), py::arg("extreme_set"), py::arg("samples"),
        py::arg("ensemble"), py::arg("loss"), py::arg("seed"), py::arg("threads") = 1);
    m.def(
        "naive_qerm_learn",
        [](const ConceptClass &c, SampleBatch &batch, const LossFunction &l,
           std::uint64_t seed) { return naive_qerm_learn(c, batch.items, l, seed); },
        py::arg("concept_class"), py::arg("samples"), py::arg("loss"), py::arg("seed"));

    m.def("theorem1_sample_size", &theorem1_sample_size, py::arg("v_cstar"),
          py::arg("size_cstar"), py::arg("epsilon"), py::arg("delta"), py::arg("constant") = 1.0,
          py::arg("v_floor") = 1e-6, py::arg("label_factor") = 1.0);

    py::class_<PacTrialReport>(m, "PacTrialReport")
        .def_readonly("trials", &PacTrialReport::trials)
        .def_readonly("epsilon", &PacTrialReport::epsilon)
        .def_readonly("delta", &PacTrialReport::delta)
        .def_readonly("success_count", &PacTrialReport::success_count)
        .def_readonly("opt_value", &PacTrialReport::opt_value)
        .def_readonly("excess_losses", &PacTrialReport::excess_losses)
        .def_readonly("chosen_ids", &PacTrialReport::chosen_ids)
        .def("success_fraction", &PacTrialReport::success_fraction);

    m.def("pac_evaluate", &pac_evaluate, py::arg("learner"), py::arg("concept_class"),
          py::arg("source"), py::arg("loss"), py::arg("ensemble"), py::arg("n"),
          py::arg("epsilon"), py::arg("trials"), py::arg("seed"), py::arg("delta") = 0.0,
          py::arg("threads") = 1);

    py::class_<LearningTask>(m, "LearningTask")
        .def_readonly("concepts", &LearningTask::concepts)
        .def_readonly("source", &LearningTask::source)
        .def_readonly("loss", &LearningTask::loss)
        .def_readonly("labels", &LearningTask::labels);

    m.def("make_state_discrimination", &make_state_discrimination, py::arg("qubits"),
          py::arg("class_size"), py::arg("label_noise"), py::arg("seed"));
    m.def("make_random_projective_class", &make_random_projective_class, py::arg("qubits"),
          py::arg("class_size"), py::arg("atom_count"), py::arg("seed"));

    m.def("run_experiment_json", [](const std::string &config_text) {
        return run_experiment(ExperimentConfig::from_json_text(config_text));
    });
}
