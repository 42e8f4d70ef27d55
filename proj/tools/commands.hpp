#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dispvo/dispvo.hpp"

namespace dispvo::cli {

namespace fs = std::filesystem;

/// `NNNNNN.disp`, falling back to `NNNNNN.pgm`; empty path when neither exists.
fs::path find_frame_file(const fs::path& dir, int index);

/// Loads frames 0, 1, ... until the first missing index (or exactly `count` when > 0).
std::vector<DisparityMap> load_frame_directory(const fs::path& dir, int count = 0);

struct SynthArgs {
    SynthConfig config;
    std::uint64_t seed = 0;
    fs::path out_dir;
};
/// Writes poses.txt, motions.txt and disparity/NNNNNN.disp under out_dir.
void cmd_synth(const SynthArgs& args, std::ostream& log);

struct PrepareArgs {
    fs::path poses;
    fs::path disparity_dir;
    fs::path out;
    bool skip_ordering = true;
};

struct Manifest {
    std::string poses;
    std::string disparity_dir;
    bool skip_ordering = true;
    int frames = 0;
    std::vector<std::array<int, 3>> triples;
    /// targets[k] holds the kTriplePairs targets of triple k (slot 2 is identity without skip-ordering).
    std::vector<TripleTargets> targets;

    std::size_t pair_count() const { return triples.size() * pairs_per_triple(skip_ordering); }
};

std::string format_manifest(const Manifest& m);
Manifest parse_manifest(std::istream& in);

/// Returns the number of pairs written.
std::size_t cmd_prepare(const PrepareArgs& args, std::ostream& log);

struct TrainArgs {
    fs::path manifest;
    fs::path out_dir;
    TrainConfig config;
};
/// Writes checkpoint.bin and loss_log.csv under out_dir. Returns final/initial step loss.
double cmd_train(const TrainArgs& args, std::ostream& log);

struct PredictArgs {
    fs::path checkpoint;
    fs::path disparity_dir;
    fs::path out;
};
void cmd_predict(const PredictArgs& args, std::ostream& log);

struct IntegrateArgs {
    fs::path motions;
    fs::path out;
};
void cmd_integrate(const IntegrateArgs& args, std::ostream& log);

struct EvaluateArgs {
    std::vector<fs::path> gt;
    std::vector<fs::path> pred;
    std::vector<std::string> names;
    std::string run_name = "run";
    fs::path out;  // stdout when empty
};
/// Returns the report text.
std::string cmd_evaluate(const EvaluateArgs& args, std::ostream& log);

struct PlotArgs {
    std::vector<fs::path> poses;
    std::vector<std::string> labels;
    fs::path out;
};
void cmd_plot(const PlotArgs& args, std::ostream& log);

/// Full command-line entry point; returns the process exit status.
int run(int argc, char** argv);

}  // namespace dispvo::cli
