#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpac/qsrm.hpp"
#include "qpac/shadow.hpp"
#include "qpac/tasks.hpp"

namespace qpac {

/// Declarative description of a batch experiment. Parsed from a JSON file;
/// every numeric range is validated at load.
struct ExperimentConfig {
    // Task
    std::string task = "state_discrimination"; // or random_projective_class, custom_file
    int qubits = 1;
    std::vector<std::size_t> class_sizes{2};
    double label_noise = 0.0;
    std::size_t atom_count = 2;
    std::string class_file; // for custom_file

    // Run
    EnsembleKind ensemble = EnsembleKind::PauliTensor;
    std::vector<LearnerKind> learners{LearnerKind::Qsrm};
    std::vector<std::size_t> n_grid{50};
    double epsilon = 0.1;
    double delta = 0.1;
    std::size_t trials = 100;
    std::uint64_t seed = 1;
    std::string output_dir = "qpac-out";
    unsigned threads = 1;

    static ExperimentConfig from_json_file(const std::string &path);
    static ExperimentConfig from_json_text(const std::string &text);

    /// Deterministic normalized rendering; also what the hash covers.
    std::string canonical_json() const;

    /// FNV-1a hash of the canonical rendering, as fixed-width hex.
    std::string hash() const;

    void validate() const;
};

/// One row of results.csv.
struct TrialRecord {
    std::string config_hash;
    std::string learner;
    std::size_t class_size = 0;
    std::size_t n = 0;
    std::size_t trial = 0;
    std::string chosen_id;
    double exact_loss = 0;
    double opt = 0;
    double excess = 0;
    bool success = false;
    double wall_time_ms = 0;
};

/// CSV column order, also written as the header row.
extern const char *const TRIAL_RECORD_COLUMNS;

/// Runs the configured experiment and writes results.csv, summary.json and
/// meta.json under the output directory. Reruns with an identical config and
/// seed reproduce results.csv byte-identically except for the wall-time
/// column. Returns the output directory.
std::string run_experiment(const ExperimentConfig &config);

/// The task a config describes, for one class size.
LearningTask build_task(const ExperimentConfig &config, std::size_t class_size);

std::string learner_kind_name(LearnerKind kind);

} // namespace qpac
