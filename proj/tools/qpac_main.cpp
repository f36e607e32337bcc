// Command-line front end: shadow generation, norm reports, extreme-point
// extraction, single learning runs, batch experiments, and concentration
// checks. Exit codes: 0 ok, 2 usage/config, 3 I/O, 4 numerical failure.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qpac/clifford.hpp"
#include "qpac/errors.hpp"
#include "qpac/experiment.hpp"
#include "qpac/parallel.hpp"
#include "qpac/pauli.hpp"
#include "qpac/qsrm.hpp"
#include "qpac/shadow.hpp"
#include "qpac/shadow_norm.hpp"
#include "qpac/tasks.hpp"
#include "qpac/version.hpp"

namespace {

using nlohmann::json;
using namespace qpac;

constexpr int EXIT_OK = 0;
constexpr int EXIT_CONFIG = 2;
constexpr int EXIT_IO = 3;
constexpr int EXIT_NUMERICAL = 4;

UnitaryEnsemble make_ensemble(const std::string &kind, int qubits) {
    switch (ensemble_kind_from_name(kind)) {
    case EnsembleKind::PauliTensor:
        return UnitaryEnsemble::pauli_tensor(qubits);
    case EnsembleKind::CliffordExact:
        return UnitaryEnsemble::clifford_exact(qubits);
    case EnsembleKind::CliffordSampled:
        return UnitaryEnsemble::clifford_sampled(qubits);
    default:
        throw ConfigError("ensemble must be pauli, clifford_exact or clifford_sampled");
    }
}

PureState fixture_state(const std::string &name, int qubits, std::uint64_t seed) {
    const std::size_t dim = std::size_t{1} << qubits;
    if (name == "zero")
        return PureState::basis_state(dim, 0);
    if (name == "plus") {
        std::vector<Complex> amps(dim, Complex(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
        return PureState(std::move(amps));
    }
    if (name == "random") {
        RngStream rng(seed, StreamDomain::TaskBuild, 99);
        return random_pure_state(dim, rng);
    }
    throw ConfigError("state must be zero, plus or random");
}

HermitianOperator load_operator_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open operator file " + path);
    json doc;
    try {
        in >> doc;
        const std::size_t dim = doc.at("dim").get<std::size_t>();
        const json &entries = doc.at("matrix");
        if (entries.size() != dim * dim)
            throw IoError("operator file: matrix entry count != dim^2");
        std::vector<Complex> flat;
        flat.reserve(dim * dim);
        for (const json &v : entries) {
            if (v.is_array() && v.size() == 2)
                flat.emplace_back(v[0].get<double>(), v[1].get<double>());
            else if (v.is_number())
                flat.emplace_back(v.get<double>(), 0.0);
            else
                throw IoError("operator file: malformed entry");
        }
        return HermitianOperator(ComplexMatrix(dim, dim, std::move(flat)));
    } catch (const json::exception &e) {
        throw IoError(std::string("operator file: ") + e.what());
    }
}

std::string resolve_output_dir(const std::string &dir) {
    namespace fs = std::filesystem;
    const char *root = std::getenv("QPAC_OUTPUT_ROOT");
    if (root != nullptr && root[0] != '\0' && fs::path(dir).is_relative())
        return (fs::path(root) / dir).string();
    return dir;
}

int cmd_shadows(int qubits, const std::string &ensemble_name, std::size_t n,
                std::uint64_t seed, const std::string &state_name, const std::string &out_path) {
    const UnitaryEnsemble ens = make_ensemble(ensemble_name, qubits);
    const PureState phi = fixture_state(state_name, qubits, seed);
    const ComplexMatrix target = phi.projector();
    LabeledStateSource source({SourceAtom{1.0, phi, 0}}, seed);

    std::vector<LabeledSample> samples = draw_samples(source, n, seed);
    const ShadowDataset ds = generate_dataset(ens, samples, seed, default_thread_count());
    if (!out_path.empty())
        save_shadow_dataset(out_path, ds);

    // Frobenius error of the running mean at logarithmic checkpoints.
    const std::size_t dim = ens.dim();
    ComplexMatrix mean(dim, dim);
    double final_error = 0.0;
    std::printf("n\tfrobenius_error\n");
    std::size_t checkpoint = 1000;
    for (std::size_t i = 0; i < ds.shadows.size(); ++i) {
        mean += ds.shadows[i].matrix.matrix();
        const std::size_t count = i + 1;
        if (count == checkpoint || count == ds.shadows.size()) {
            const ComplexMatrix avg = mean.scaled(1.0 / static_cast<double>(count));
            final_error = (avg - target).frobenius_norm();
            std::printf("%zu\t%.17g\n", count, final_error);
            if (count == checkpoint)
                checkpoint *= 10;
        }
    }
    std::printf("{\"n\":%zu,\"final_error\":%.17g", ds.shadows.size(), final_error);
    if (!out_path.empty())
        std::printf(",\"path\":\"%s\"", out_path.c_str());
    std::printf("}\n");
    if (n >= 100000 && final_error >= 0.05) {
        std::fprintf(stderr, "error: estimate mean did not converge to the state\n");
        return EXIT_NUMERICAL;
    }
    return EXIT_OK;
}

int cmd_norm(const std::string &operator_path, const std::string &class_path,
             const std::string &ensemble_name, int qubits) {
    if (operator_path.empty() == class_path.empty())
        throw ConfigError("norm: pass exactly one of --operator or --class");
    if (!operator_path.empty()) {
        const HermitianOperator o = load_operator_file(operator_path);
        int q = 0;
        for (std::size_t d = 1; d < o.dim(); d <<= 1)
            ++q;
        if ((std::size_t{1} << q) != o.dim())
            throw ConfigError("norm: operator dimension must be a power of two");
        const UnitaryEnsemble ens = make_ensemble(ensemble_name, q);
        if (ens.enumerable()) {
            const ShadowNormReport report = shadow_norm_report(ens, o, operator_path);
            std::printf("%s\n", report.to_json().c_str());
        } else {
            // Sampled ensembles get the Monte Carlo estimate with its error.
            ShadowNormReport report;
            report.operator_id = operator_path;
            RngStream rng(1, StreamDomain::MonteCarlo, 0);
            double se = 0.0;
            const std::size_t samples = 4096;
            report.shadow_norm = shadow_norm_monte_carlo(ens, o, samples, rng, &se);
            report.std_error = se;
            report.hs_bound =
                std::sqrt(3.0 * trace_product(o.matrix(), o.matrix()).real());
            report.method = "monte_carlo(" + std::to_string(samples) + ")";
            std::printf("%s\n", report.to_json().c_str());
        }
        return EXIT_OK;
    }
    const ConceptClass c = load_concept_class(class_path);
    const UnitaryEnsemble ens = make_ensemble(ensemble_name, qubits);
    if (ens.dim() != c.dim())
        throw ConfigError("norm: class dimension does not match --qubits");
    std::vector<int> labels = c.labels();
    std::sort(labels.begin(), labels.end());
    const LossFunction loss = LossFunction::zero_one(labels);
    const ExtremePointSet cstar = extreme_points(c);
    const double v = class_constant_v(ens, c, cstar, loss, labels);
    json out;
    out["v_cstar"] = v;
    out["extreme_size"] = cstar.size();
    out["extreme_ids"] = cstar.ids;
    std::printf("%s\n", out.dump().c_str());
    return EXIT_OK;
}

int cmd_extreme(const std::string &class_path, double tolerance) {
    const ConceptClass c = load_concept_class(class_path);
    const ExtremePointSet cstar = extreme_points(c, tolerance);
    json out;
    out["parent_size"] = cstar.parent_size;
    out["extreme_ids"] = cstar.ids;
    json certs = json::array();
    for (const ExtremeCertificate &cert : cstar.certificates) {
        json entry;
        entry["member"] = c.id(cert.member_index);
        json support = json::array();
        for (std::size_t s : cert.support)
            support.push_back(c.id(s));
        entry["support"] = std::move(support);
        entry["weights"] = cert.weights;
        entry["residual"] = cert.residual;
        certs.push_back(std::move(entry));
    }
    out["certificates"] = std::move(certs);
    json flagged = json::array();
    for (std::size_t idx : cstar.boundary_flagged)
        flagged.push_back(c.id(idx));
    out["boundary_flagged"] = std::move(flagged);
    std::printf("%s\n", out.dump(2).c_str());
    return EXIT_OK;
}

int cmd_learn(const std::string &config_path, std::uint64_t seed_override, bool has_seed,
              unsigned threads) {
    ExperimentConfig config = ExperimentConfig::from_json_file(config_path);
    if (has_seed)
        config.seed = seed_override;
    const LearningTask task = build_task(config, config.class_sizes.front());
    UnitaryEnsemble ens = [&] {
        switch (config.ensemble) {
        case EnsembleKind::CliffordExact:
            return UnitaryEnsemble::clifford_exact(config.qubits);
        case EnsembleKind::CliffordSampled:
            return UnitaryEnsemble::clifford_sampled(config.qubits);
        default:
            return UnitaryEnsemble::pauli_tensor(config.qubits);
        }
    }();
    const ExtremePointSet cstar = extreme_points(task.concepts);
    std::vector<LabeledSample> samples = draw_samples(task.source, config.n_grid.front(),
                                                      config.seed);
    const LearnerOutput out =
        qsrm_learn(task.concepts, cstar, samples, ens, task.loss, config.seed, threads);
    const double exact = expected_loss(
        task.concepts.member(task.concepts.index_of(out.chosen_id)), task.loss, task.source);
    double opt = exact;
    for (std::size_t idx : cstar.member_indices)
        opt = std::min(opt, expected_loss(task.concepts.member(idx), task.loss, task.source));
    json doc;
    doc["chosen_id"] = out.chosen_id;
    doc["exact_loss"] = exact;
    doc["opt"] = opt;
    doc["n"] = out.n_used;
    doc["empirical_losses"] = out.empirical_losses;
    std::printf("%s\n", doc.dump(2).c_str());
    return EXIT_OK;
}

int cmd_experiment(const std::string &config_path, std::uint64_t seed_override, bool has_seed,
                   const std::string &out_override, unsigned threads, bool has_threads) {
    ExperimentConfig config = ExperimentConfig::from_json_file(config_path);
    if (has_seed)
        config.seed = seed_override;
    if (!out_override.empty())
        config.output_dir = out_override;
    if (has_threads)
        config.threads = threads;
    config.output_dir = resolve_output_dir(config.output_dir);
    const std::string dir = run_experiment(config);
    std::printf("{\"output_dir\":\"%s\"}\n", dir.c_str());
    return EXIT_OK;
}

int cmd_concentration(int qubits, std::size_t n, double epsilon, std::size_t trials,
                      std::uint64_t seed, const std::string &ensemble_name, double label_noise,
                      unsigned threads) {
    const LearningTask task = make_state_discrimination(qubits, 2, label_noise, seed);
    const UnitaryEnsemble ens = make_ensemble(ensemble_name, qubits);
    const ConcentrationReport report = verify_concentration(
        ens, task.source, task.concepts.member(0), task.loss, n, epsilon, trials, seed, threads);
    std::printf("%s\n", report.to_json().c_str());
    return report.pass ? EXIT_OK : EXIT_NUMERICAL;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Classical-shadow learning of measurement classes"};
    app.set_version_flag("--version", QPAC_VERSION);
    app.require_subcommand(1);

    // shadows
    auto *shadows = app.add_subcommand("shadows", "Generate a shadow dataset and check the "
                                                  "estimate mean against the true state");
    int sh_qubits = 1;
    std::string sh_ensemble = "pauli";
    std::size_t sh_n = 100000;
    std::uint64_t sh_seed = 1;
    std::string sh_state = "plus";
    std::string sh_out;
    shadows->add_option("--qubits", sh_qubits, "Qubit count (1..6)");
    shadows->add_option("--ensemble", sh_ensemble, "pauli | clifford_exact | clifford_sampled");
    shadows->add_option("--n", sh_n, "Number of shadows");
    shadows->add_option("--seed", sh_seed, "RNG seed");
    shadows->add_option("--state", sh_state, "Fixture state: zero | plus | random");
    shadows->add_option("--out", sh_out, "Dataset file to write");

    // norm
    auto *norm = app.add_subcommand("norm", "Shadow-norm report for an operator or a class");
    std::string no_operator, no_class;
    std::string no_ensemble = "pauli";
    int no_qubits = 1;
    norm->add_option("--operator", no_operator, "Operator JSON file");
    norm->add_option("--class", no_class, "Concept class JSON file");
    norm->add_option("--ensemble", no_ensemble, "pauli | clifford_exact | clifford_sampled");
    norm->add_option("--qubits", no_qubits, "Qubit count (for --class)");

    // extreme
    auto *extreme = app.add_subcommand("extreme", "Extreme points of a concept class file");
    std::string ex_class;
    double ex_tol = 1e-9;
    extreme->add_option("--class", ex_class, "Concept class JSON file")->required();
    extreme->add_option("--tol", ex_tol, "Feasibility tolerance");

    // learn
    auto *learn = app.add_subcommand("learn", "One shadow-risk-minimization run");
    std::string le_config;
    learn->add_option("--config", le_config, "Experiment config JSON")->required();

    // experiment
    auto *experiment = app.add_subcommand("experiment", "Config-driven batch experiment");
    std::string xp_config, xp_out;
    experiment->add_option("--config", xp_config, "Experiment config JSON")->required();
    experiment->add_option("--out", xp_out, "Output directory override");

    // concentration
    auto *concentration =
        app.add_subcommand("concentration", "Empirical check of the tail bound");
    int co_qubits = 1;
    std::size_t co_n = 50;
    double co_epsilon = 0.05;
    std::size_t co_trials = 2000;
    std::uint64_t co_seed = 1;
    std::string co_ensemble = "pauli";
    double co_noise = 0.0;
    concentration->add_option("--qubits", co_qubits, "Qubit count");
    concentration->add_option("--n", co_n, "Shadows per dataset");
    concentration->add_option("--epsilon", co_epsilon, "Deviation threshold");
    concentration->add_option("--trials", co_trials, "Independent datasets");
    concentration->add_option("--seed", co_seed, "RNG seed");
    concentration->add_option("--ensemble", co_ensemble, "Measurement ensemble");
    concentration->add_option("--label-noise", co_noise, "Task label noise");

    std::uint64_t global_seed = 0;
    unsigned global_threads = 1;
    auto *seed_opt = app.add_option("--seed", global_seed, "Seed override");
    auto *threads_opt = app.add_option("--threads", global_threads, "Worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? EXIT_OK : EXIT_CONFIG;
    }

    const bool has_seed = seed_opt->count() > 0;
    const bool has_threads = threads_opt->count() > 0;
    const unsigned threads = has_threads ? global_threads : default_thread_count();

    try {
        if (shadows->parsed())
            return cmd_shadows(sh_qubits, sh_ensemble, sh_n, has_seed ? global_seed : sh_seed,
                               sh_state, sh_out);
        if (norm->parsed())
            return cmd_norm(no_operator, no_class, no_ensemble, no_qubits);
        if (extreme->parsed())
            return cmd_extreme(ex_class, ex_tol);
        if (learn->parsed())
            return cmd_learn(le_config, global_seed, has_seed, threads);
        if (experiment->parsed())
            return cmd_experiment(xp_config, global_seed, has_seed, xp_out, global_threads,
                                  has_threads);
        if (concentration->parsed())
            return cmd_concentration(co_qubits, co_n, co_epsilon, co_trials,
                                     has_seed ? global_seed : co_seed, co_ensemble, co_noise,
                                     threads);
    } catch (const ConfigError &e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return EXIT_CONFIG;
    } catch (const RangeError &e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return EXIT_CONFIG;
    } catch (const ValidationError &e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return EXIT_CONFIG;
    } catch (const LabelDomainError &e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return EXIT_CONFIG;
    } catch (const IoError &e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return EXIT_IO;
    } catch (const Error &e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return EXIT_NUMERICAL;
    }
    return EXIT_CONFIG;
}
