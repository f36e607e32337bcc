#include "qpac/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "qpac/errors.hpp"
#include "qpac/parallel.hpp"
#include "qpac/shadow_norm.hpp"
#include "qpac/version.hpp"

namespace qpac {

using nlohmann::json;

const char *const TRIAL_RECORD_COLUMNS =
    "config_hash,learner,class_size,n,trial,chosen_id,exact_loss,opt,excess,success,"
    "wall_time_ms";

std::string learner_kind_name(LearnerKind kind) {
    return kind == LearnerKind::Qsrm ? "qsrm" : "naive";
}

namespace {

std::string render17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

LearnerKind learner_kind_from_name(const std::string &name) {
    if (name == "qsrm")
        return LearnerKind::Qsrm;
    if (name == "naive")
        return LearnerKind::NaiveQerm;
    throw ConfigError("unknown learner: " + name);
}

} // namespace

void ExperimentConfig::validate() const {
    if (task != "state_discrimination" && task != "random_projective_class" &&
        task != "custom_file")
        throw ConfigError("unknown task: " + task);
    if (task == "custom_file" && class_file.empty())
        throw ConfigError("custom_file task needs class_file");
    if (qubits < 1 || qubits > 6)
        throw ConfigError("qubits must be in 1..6");
    if (class_sizes.empty())
        throw ConfigError("class_sizes must be nonempty");
    for (std::size_t s : class_sizes)
        if (s < 1)
            throw ConfigError("class sizes must be positive");
    if (!(label_noise >= 0.0 && label_noise < 0.5))
        throw ConfigError("label_noise must be in [0, 0.5)");
    if (atom_count < 1)
        throw ConfigError("atom_count must be positive");
    if (learners.empty())
        throw ConfigError("learners must be nonempty");
    if (n_grid.empty())
        throw ConfigError("n_grid must be nonempty");
    for (std::size_t n : n_grid)
        if (n < 1)
            throw ConfigError("n_grid entries must be positive");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw ConfigError("epsilon must be in (0, 1)");
    if (!(delta > 0.0 && delta < 1.0))
        throw ConfigError("delta must be in (0, 1)");
    if (trials < 1)
        throw ConfigError("trials must be positive");
    if (output_dir.empty())
        throw ConfigError("output_dir must be nonempty");
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string &text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception &e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    ExperimentConfig config;
    try {
        if (doc.contains("task")) {
            const json &t = doc["task"];
            if (t.is_string()) {
                config.task = t.get<std::string>();
            } else {
                config.task = t.value("name", config.task);
                config.qubits = t.value("qubits", config.qubits);
                if (t.contains("class_sizes"))
                    config.class_sizes = t["class_sizes"].get<std::vector<std::size_t>>();
                else if (t.contains("class_size"))
                    config.class_sizes = {t["class_size"].get<std::size_t>()};
                config.label_noise = t.value("label_noise", config.label_noise);
                config.atom_count = t.value("atoms", config.atom_count);
                config.class_file = t.value("class_file", config.class_file);
            }
        }
        if (doc.contains("ensemble"))
            config.ensemble = ensemble_kind_from_name(doc["ensemble"].get<std::string>());
        if (doc.contains("learner")) {
            const std::string name = doc["learner"].get<std::string>();
            if (name == "both")
                config.learners = {LearnerKind::Qsrm, LearnerKind::NaiveQerm};
            else
                config.learners = {learner_kind_from_name(name)};
        }
        if (doc.contains("n_grid"))
            config.n_grid = doc["n_grid"].get<std::vector<std::size_t>>();
        config.epsilon = doc.value("epsilon", config.epsilon);
        config.delta = doc.value("delta", config.delta);
        config.trials = doc.value("trials", config.trials);
        config.seed = doc.value("seed", config.seed);
        config.output_dir = doc.value("output_dir", config.output_dir);
        config.threads = doc.value("threads", config.threads);
    } catch (const json::exception &e) {
        throw ConfigError(std::string("config schema error: ") + e.what());
    }
    config.validate();
    return config;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("config: cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return from_json_text(buffer.str());
}

std::string ExperimentConfig::canonical_json() const {
    json doc;
    doc["task"] = {{"name", task},
                   {"qubits", qubits},
                   {"class_sizes", class_sizes},
                   {"label_noise", label_noise},
                   {"atoms", atom_count},
                   {"class_file", class_file}};
    doc["ensemble"] = ensemble_kind_name(ensemble);
    std::vector<std::string> learner_names;
    for (LearnerKind k : learners)
        learner_names.push_back(learner_kind_name(k));
    doc["learners"] = learner_names;
    doc["n_grid"] = n_grid;
    doc["epsilon"] = epsilon;
    doc["delta"] = delta;
    doc["trials"] = trials;
    doc["seed"] = seed;
    return doc.dump();
}

std::string ExperimentConfig::hash() const {
    const std::string text = canonical_json();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

LearningTask build_task(const ExperimentConfig &config, std::size_t class_size) {
    if (config.task == "state_discrimination")
        return make_state_discrimination(config.qubits, class_size, config.label_noise,
                                         config.seed);
    if (config.task == "random_projective_class")
        return make_random_projective_class(config.qubits, class_size, config.atom_count,
                                            config.seed);
    if (config.task == "custom_file") {
        ConceptClass concepts = load_concept_class(config.class_file);
        RngStream rng(config.seed, StreamDomain::TaskBuild, 1);
        std::vector<SourceAtom> atoms;
        for (std::size_t a = 0; a < config.atom_count; ++a)
            atoms.push_back(SourceAtom{
                1.0 / static_cast<double>(config.atom_count),
                random_pure_state(concepts.dim(), rng),
                concepts.labels()[rng.uniform_index(concepts.labels().size())]});
        std::vector<int> labels = concepts.labels();
        std::sort(labels.begin(), labels.end());
        return LearningTask{std::move(concepts), LabeledStateSource(std::move(atoms), config.seed),
                            LossFunction::zero_one(labels), labels};
    }
    throw ConfigError("unknown task: " + config.task);
}

namespace {

UnitaryEnsemble build_ensemble(const ExperimentConfig &config) {
    switch (config.ensemble) {
    case EnsembleKind::PauliTensor:
        return UnitaryEnsemble::pauli_tensor(config.qubits);
    case EnsembleKind::CliffordExact:
        return UnitaryEnsemble::clifford_exact(config.qubits);
    case EnsembleKind::CliffordSampled:
        return UnitaryEnsemble::clifford_sampled(config.qubits);
    case EnsembleKind::Custom:
        throw ConfigError("custom ensembles are not configurable from files");
    }
    throw ConfigError("unknown ensemble");
}

} // namespace

std::string run_experiment(const ExperimentConfig &config) {
    config.validate();
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec)
        throw IoError("run_experiment: cannot create " + config.output_dir);

    const std::string hash = config.hash();
    const fs::path out_dir(config.output_dir);
    std::ofstream csv(out_dir / "results.csv");
    if (!csv)
        throw IoError("run_experiment: cannot write results.csv");
    csv << TRIAL_RECORD_COLUMNS << '\n';

    json summary;
    summary["config_hash"] = hash;
    std::uint64_t combo_counter = 0;

    for (std::size_t class_size : config.class_sizes) {
        const LearningTask task = build_task(config, class_size);
        const UnitaryEnsemble ens = build_ensemble(config);
        const ExtremePointSet cstar = extreme_points(task.concepts);

        double opt = std::numeric_limits<double>::infinity();
        for (std::size_t idx : cstar.member_indices)
            opt = std::min(opt, expected_loss(task.concepts.member(idx), task.loss, task.source));

        double v_cstar;
        if (ens.enumerable()) {
            v_cstar = class_constant_v(ens, task.concepts, cstar, task.loss, task.labels);
        } else {
            // Monte Carlo stand-in for the sampled-Clifford ensemble.
            double v = 0.0;
            RngStream rng(config.seed, StreamDomain::MonteCarlo, combo_counter);
            for (std::size_t idx : cstar.member_indices) {
                for (int y : task.labels) {
                    const HermitianOperator cond =
                        conditional_loss_operator(task.concepts.member(idx), task.loss, y);
                    ComplexMatrix centered = cond.matrix();
                    const Complex shift = centered.trace() / static_cast<double>(ens.dim());
                    for (std::size_t i = 0; i < ens.dim(); ++i)
                        centered(i, i) -= shift;
                    const double norm = shadow_norm_monte_carlo(
                        ens, HermitianOperator(std::move(centered)), 4096, rng);
                    v = std::max(v, norm * norm);
                }
            }
            v_cstar = v;
        }

        const std::int64_t theorem_n = theorem1_sample_size(
            v_cstar, std::max<std::size_t>(cstar.size(), 1), config.epsilon, config.delta);

        json class_summary;
        class_summary["class_size"] = class_size;
        class_summary["extreme_size"] = cstar.size();
        class_summary["extreme_ids"] = cstar.ids;
        class_summary["opt"] = opt;
        class_summary["v_cstar"] = v_cstar;
        class_summary["theorem1_n"] = theorem_n;

        for (LearnerKind learner : config.learners) {
            const std::string learner_name = learner_kind_name(learner);
            for (std::size_t n : config.n_grid) {
                const std::uint64_t combo_seed =
                    derive_stream(config.seed, StreamDomain::Trial, 0x10000 + combo_counter);
                ++combo_counter;
                if (learner == LearnerKind::NaiveQerm && n < task.concepts.size())
                    throw ConfigError("naive learner needs n >= class size");

                std::vector<TrialRecord> records(config.trials);
                parallel_for(config.trials, config.threads, [&](std::size_t t) {
                    const auto start = std::chrono::steady_clock::now();
                    const std::uint64_t trial_seed =
                        derive_stream(combo_seed, StreamDomain::Trial, t);
                    std::vector<LabeledSample> samples =
                        draw_samples(task.source, n, trial_seed);
                    LearnerOutput out;
                    if (learner == LearnerKind::Qsrm)
                        out = qsrm_learn(task.concepts, cstar, samples, ens, task.loss,
                                         trial_seed);
                    else
                        out = naive_qerm_learn(task.concepts, samples, task.loss, trial_seed);
                    const double exact = expected_loss(
                        task.concepts.member(task.concepts.index_of(out.chosen_id)), task.loss,
                        task.source);
                    const auto stop = std::chrono::steady_clock::now();
                    TrialRecord &rec = records[t];
                    rec.config_hash = hash;
                    rec.learner = learner_name;
                    rec.class_size = class_size;
                    rec.n = n;
                    rec.trial = t;
                    rec.chosen_id = out.chosen_id;
                    rec.exact_loss = exact;
                    rec.opt = opt;
                    rec.excess = exact - opt;
                    rec.success = rec.excess <= config.epsilon + 1e-12;
                    rec.wall_time_ms =
                        std::chrono::duration<double, std::milli>(stop - start).count();
                });

                std::size_t successes = 0;
                for (const TrialRecord &rec : records) {
                    successes += rec.success ? 1 : 0;
                    csv << rec.config_hash << ',' << rec.learner << ',' << rec.class_size << ','
                        << rec.n << ',' << rec.trial << ',' << rec.chosen_id << ','
                        << render17(rec.exact_loss) << ',' << render17(rec.opt) << ','
                        << render17(rec.excess) << ',' << (rec.success ? 1 : 0) << ',';
                    char tbuf[32];
                    std::snprintf(tbuf, sizeof(tbuf), "%.3f", rec.wall_time_ms);
                    csv << tbuf << '\n';
                }
                class_summary["success_fraction"][learner_name][std::to_string(n)] =
                    static_cast<double>(successes) / static_cast<double>(config.trials);
            }
        }
        summary["class_sizes"][std::to_string(class_size)] = std::move(class_summary);
    }
    if (!csv)
        throw IoError("run_experiment: writing results.csv failed");
    csv.close();

    {
        std::ofstream summary_file(out_dir / "summary.json");
        if (!summary_file)
            throw IoError("run_experiment: cannot write summary.json");
        summary_file << summary.dump(2) << '\n';
    }
    {
        json meta;
        meta["artifact_version"] = QPAC_VERSION;
        meta["seed"] = config.seed;
        meta["config_hash"] = hash;
        meta["config"] = json::parse(config.canonical_json());
        meta["output_dir"] = config.output_dir;
        std::ofstream meta_file(out_dir / "meta.json");
        if (!meta_file)
            throw IoError("run_experiment: cannot write meta.json");
        meta_file << meta.dump(2) << '\n';
    }
    return config.output_dir;
}

} // namespace qpac
