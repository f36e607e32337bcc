#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "qpac/experiment.hpp"

using namespace qpac;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> read_lines(const fs::path &path) {
    std::ifstream in(path);
    REQUIRE(in);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line))
        lines.push_back(line);
    return lines;
}

// Strip the wall-time column (the last comma-separated field).
std::string mask_wall_time(const std::string &line) {
    const auto at = line.rfind(',');
    return line.substr(0, at);
}

} // namespace

TEST_CASE("config parsing: flat and nested forms") {
    const ExperimentConfig flat = ExperimentConfig::from_json_text(
        R"({"task": "state_discrimination", "n_grid": [25], "trials": 3, "seed": 5})");
    CHECK(flat.task == "state_discrimination");
    CHECK(flat.n_grid == std::vector<std::size_t>{25});
    CHECK(flat.trials == 3);
    CHECK(flat.seed == 5);

    const ExperimentConfig nested = ExperimentConfig::from_json_text(
        R"({"task": {"name": "state_discrimination", "qubits": 2, "class_sizes": [2, 8],
             "label_noise": 0.1}, "learner": "both", "epsilon": 0.2, "delta": 0.2})");
    CHECK(nested.qubits == 2);
    CHECK(nested.class_sizes == std::vector<std::size_t>{2, 8});
    CHECK(nested.learners.size() == 2);
    CHECK(nested.label_noise == doctest::Approx(0.1));
}

TEST_CASE("config validation rejects bad values") {
    CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"task": "no_such_task"})"),
                    ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"epsilon": 2.0})"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"n_grid": []})"), ConfigError);
    CHECK_THROWS_AS(
        ExperimentConfig::from_json_text(R"({"task": {"name": "state_discrimination",
                                              "qubits": 9}})"),
        ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json_text("not json"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"learner": "bogus"})"), ConfigError);
}

TEST_CASE("config hashing is stable and sensitive") {
    ExperimentConfig a, b;
    CHECK(a.hash() == b.hash());
    b.seed = 999;
    CHECK(a.hash() != b.hash());
    CHECK(a.hash().size() == 16);
}

TEST_CASE("experiment run: record layout and byte-identical reruns") {
    ExperimentConfig config;
    config.task = "state_discrimination";
    config.qubits = 1;
    config.class_sizes = {2};
    config.label_noise = 0.0;
    config.learners = {LearnerKind::Qsrm};
    config.n_grid = {50};
    config.epsilon = 0.2;
    config.delta = 0.1;
    config.trials = 10;
    config.seed = 4242;
    config.threads = 2;

    const fs::path base = fs::temp_directory_path() / "qpac_experiment_test";
    fs::remove_all(base);
    config.output_dir = (base / "run1").string();
    run_experiment(config);
    config.output_dir = (base / "run2").string();
    run_experiment(config);

    const auto lines1 = read_lines(base / "run1" / "results.csv");
    const auto lines2 = read_lines(base / "run2" / "results.csv");
    REQUIRE(lines1.size() == 11); // header + one row per trial
    REQUIRE(lines1.size() == lines2.size());
    CHECK(lines1[0] == TRIAL_RECORD_COLUMNS);
    for (std::size_t i = 0; i < lines1.size(); ++i)
        CHECK(mask_wall_time(lines1[i]) == mask_wall_time(lines2[i]));

    // The noiseless task is learnable at n=50: all rows succeed.
    for (std::size_t i = 1; i < lines1.size(); ++i) {
        std::istringstream row(lines1[i]);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ','))
            fields.push_back(field);
        REQUIRE(fields.size() == 11);
        CHECK(fields[1] == "qsrm");
        CHECK(fields[2] == "2");
        CHECK(fields[3] == "50");
        CHECK(fields[9] == "1");
    }

    CHECK(fs::exists(base / "run1" / "summary.json"));
    CHECK(fs::exists(base / "run1" / "meta.json"));
    fs::remove_all(base);
}

TEST_CASE("experiment run: both learners over a class ladder") {
    ExperimentConfig config;
    config.task = "state_discrimination";
    config.class_sizes = {2, 4};
    config.label_noise = 0.1;
    config.learners = {LearnerKind::Qsrm, LearnerKind::NaiveQerm};
    config.n_grid = {24};
    config.epsilon = 0.15;
    config.delta = 0.2;
    config.trials = 4;
    config.seed = 77;
    const fs::path base = fs::temp_directory_path() / "qpac_experiment_ladder";
    fs::remove_all(base);
    config.output_dir = base.string();
    run_experiment(config);

    const auto lines = read_lines(base / "results.csv");
    CHECK(lines.size() == 1 + 2 * 2 * 4); // classes x learners x trials
    const auto summary = read_lines(base / "summary.json");
    bool has_v = false, has_theorem = false;
    for (const std::string &line : summary) {
        has_v |= line.find("v_cstar") != std::string::npos;
        has_theorem |= line.find("theorem1_n") != std::string::npos;
    }
    CHECK(has_v);
    CHECK(has_theorem);
    fs::remove_all(base);
}

TEST_CASE("experiment run: naive learner needs enough samples per concept") {
    ExperimentConfig config;
    config.class_sizes = {8};
    config.learners = {LearnerKind::NaiveQerm};
    config.n_grid = {4};
    config.trials = 2;
    config.output_dir =
        (fs::temp_directory_path() / "qpac_experiment_insufficient").string();
    CHECK_THROWS_AS(run_experiment(config), ConfigError);
    fs::remove_all(config.output_dir);
}

TEST_CASE("custom class files drive the custom_file task") {
    namespace fsn = std::filesystem;
    const fsn::path dir = fsn::temp_directory_path() / "qpac_custom_task";
    fsn::create_directories(dir);
    const LearningTask seed_task = make_state_discrimination(1, 3, 0.0, 31);
    const std::string class_path = (dir / "class.json").string();
    save_concept_class(class_path, seed_task.concepts);

    ExperimentConfig config;
    config.task = "custom_file";
    config.class_file = class_path;
    config.atom_count = 2;
    config.trials = 2;
    config.n_grid = {10};
    config.seed = 32;
    const LearningTask task = build_task(config, 3);
    CHECK(task.concepts.size() == 3);
    CHECK(task.source.dim() == 2);
    fsn::remove_all(dir);
}
