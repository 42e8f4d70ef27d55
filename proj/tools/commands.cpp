#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

namespace dispvo::cli {

namespace {

void ensure_parent(const fs::path& file) {
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
}

std::ofstream open_out(const fs::path& file, bool binary = false) {
    ensure_parent(file);
    std::ofstream out(file, binary ? std::ios::binary : std::ios::out);
    if (!out) throw InputError("cannot open " + file.string() + " for writing");
    return out;
}

std::string label_for(const fs::path& p) { return p.stem().string(); }

}  // namespace

fs::path find_frame_file(const fs::path& dir, int index) {
    for (const char* ext : {".disp", ".pgm"}) {
        fs::path p = dir / fmt::format("{:06d}{}", index, ext);
        if (fs::exists(p)) return p;
    }
    return {};
}

std::vector<DisparityMap> load_frame_directory(const fs::path& dir, int count) {
    if (!fs::is_directory(dir)) throw InputError("disparity directory " + dir.string() + " does not exist");
    std::vector<DisparityMap> frames;
    for (int k = 0; count <= 0 || k < count; ++k) {
        const fs::path p = find_frame_file(dir, k);
        if (p.empty()) {
            if (count > 0) throw InputError(fmt::format("missing disparity frame for index {} in {}", k, dir.string()));
            break;
        }
        frames.push_back(load_disparity(p, k));
    }
    return frames;
}

void cmd_synth(const SynthArgs& args, std::ostream& log) {
    const SyntheticSequence seq = generate_synthetic_sequence(args.config, args.seed);
    const fs::path disp_dir = args.out_dir / "disparity";
    fs::create_directories(disp_dir);
    write_kitti_poses(args.out_dir / "poses.txt", seq.poses);
    write_motions(args.out_dir / "motions.txt", seq.motions);
    for (const auto& f : seq.frames) save_disparity(f, disp_dir / fmt::format("{:06d}.disp", f.frame_index));
    log << fmt::format("synth: {} frames ({}x{}), {} boxes -> {}\n", seq.frames.size(), args.config.height,
                       args.config.width, seq.boxes.size(), args.out_dir.string());
}

std::string format_manifest(const Manifest& m) {
    std::string out = "# dispvo pair manifest v1\n";
    out += "poses " + m.poses + "\n";
    out += "disparity_dir " + m.disparity_dir + "\n";
    out += fmt::format("skip_ordering {}\n", m.skip_ordering ? 1 : 0);
    out += fmt::format("frames {}\n", m.frames);
    out += fmt::format("triples {}\n", m.triples.size());
    out += fmt::format("pairs {}\n", m.pair_count());
    const std::size_t per = pairs_per_triple(m.skip_ordering);
    for (std::size_t k = 0; k < m.triples.size(); ++k) {
        const auto& t = m.triples[k];
        out += fmt::format("triple {} {} {} {}\n", k, t[0], t[1], t[2]);
        for (std::size_t p = 0; p < per; ++p) {
            const auto [a, b] = kTriplePairs[p];
            const RelativeMotion& r = m.targets[k][p];
            out += fmt::format("pair {} {} {} {} {} {} {} {} {} {}\n", k, t[static_cast<std::size_t>(a)],
                               t[static_cast<std::size_t>(b)], b - a, format_real(r.euler.roll),
                               format_real(r.euler.pitch), format_real(r.euler.yaw), format_real(r.translation.x()),
                               format_real(r.translation.y()), format_real(r.translation.z()));
        }
    }
    return out;
}

Manifest parse_manifest(std::istream& in) {
    Manifest m;
    std::string line;
    std::size_t line_no = 0;
    std::size_t declared_triples = 0, declared_pairs = 0;
    std::vector<std::size_t> pairs_seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::string key;
        ss >> key;
        if (key == "poses") {
            std::getline(ss >> std::ws, m.poses);
        } else if (key == "disparity_dir") {
            std::getline(ss >> std::ws, m.disparity_dir);
        } else if (key == "skip_ordering") {
            int v = 0;
            if (!(ss >> v)) throw ParseError(line_no, "bad skip_ordering");
            m.skip_ordering = v != 0;
        } else if (key == "frames") {
            if (!(ss >> m.frames)) throw ParseError(line_no, "bad frame count");
        } else if (key == "triples") {
            if (!(ss >> declared_triples)) throw ParseError(line_no, "bad triple count");
        } else if (key == "pairs") {
            if (!(ss >> declared_pairs)) throw ParseError(line_no, "bad pair count");
        } else if (key == "triple") {
            std::size_t k = 0;
            std::array<int, 3> t{};
            if (!(ss >> k >> t[0] >> t[1] >> t[2]) || k != m.triples.size()) throw ParseError(line_no, "bad triple");
            m.triples.push_back(t);
            m.targets.emplace_back();
            pairs_seen.push_back(0);
        } else if (key == "pair") {
            std::size_t k = 0;
            int a = 0, b = 0, gap = 0;
            double e[3], tr[3];
            if (!(ss >> k >> a >> b >> gap >> e[0] >> e[1] >> e[2] >> tr[0] >> tr[1] >> tr[2]) ||
                k + 1 != m.triples.size() || pairs_seen[k] >= 3 || gap != b - a) {
                throw ParseError(line_no, "bad pair");
            }
            m.targets[k][pairs_seen[k]++] = RelativeMotion::from_euler({e[0], e[1], e[2]}, Vec3(tr[0], tr[1], tr[2]));
        } else {
            throw ParseError(line_no, "unknown manifest key '" + key + "'");
        }
    }
    if (m.triples.size() != declared_triples || m.pair_count() != declared_pairs) {
        throw ParseError(line_no, "manifest counts do not match its contents");
    }
    for (std::size_t seen : pairs_seen) {
        if (seen != pairs_per_triple(m.skip_ordering)) throw ParseError(line_no, "triple has the wrong number of pairs");
    }
    return m;
}

std::size_t cmd_prepare(const PrepareArgs& args, std::ostream& log) {
    const std::vector<Pose> poses = read_kitti_poses(args.poses);
    std::vector<DisparityMap> frames;
    frames.reserve(poses.size());
    for (std::size_t k = 0; k < poses.size(); ++k) {
        const fs::path p = find_frame_file(args.disparity_dir, static_cast<int>(k));
        if (p.empty()) {
            throw InputError(fmt::format("missing disparity frame for pose index {} in {}", k, args.disparity_dir.string()));
        }
        frames.push_back(load_disparity(p, static_cast<int>(k)));
    }
    const auto triples = make_triples(frames, poses);

    Manifest m;
    m.poses = args.poses.string();
    m.disparity_dir = args.disparity_dir.string();
    m.skip_ordering = args.skip_ordering;
    m.frames = static_cast<int>(frames.size());
    for (std::size_t k = 0; k < triples.size(); ++k) {
        const int t = triples[k].frames[0].frame_index;
        m.triples.push_back({t, t + 1, t + 2});
        m.targets.push_back(triple_targets(triples[k]));
    }
    auto out = open_out(args.out);
    out << format_manifest(m);
    log << fmt::format("prepare: {} frames, {} triples, {} pairs (skip-ordering {})\n", m.frames, m.triples.size(),
                       m.pair_count(), m.skip_ordering ? "on" : "off");
    return m.pair_count();
}

double cmd_train(const TrainArgs& args, std::ostream& log) {
    std::ifstream in(args.manifest);
    if (!in) throw InputError("cannot open manifest " + args.manifest.string());
    const Manifest m = parse_manifest(in);
    if (m.triples.empty()) throw InputError("manifest has no triples");
    const auto frames = load_frame_directory(m.disparity_dir, m.frames);

    std::vector<TripleSample> samples;
    samples.reserve(m.triples.size());
    for (std::size_t k = 0; k < m.triples.size(); ++k) {
        TripleSample s;
        for (std::size_t j = 0; j < 3; ++j) {
            const int idx = m.triples[k][j];
            if (idx < 0 || idx >= m.frames) throw InputError(fmt::format("triple {} references missing frame {}", k, idx));
            s.frames[j] = to_tensor(frames[static_cast<std::size_t>(idx)]);
        }
        s.targets = m.targets[k];
        samples.push_back(std::move(s));
    }

    TrainConfig cfg = args.config;
    cfg.skip_ordering = m.skip_ordering;
    cfg.arch.height = frames.front().height;
    cfg.arch.width = frames.front().width;
    cfg.validate();

    fs::create_directories(args.out_dir);
    auto log_file = open_out(args.out_dir / "loss_log.csv");
    log_file << "epoch,step,lr,l_rot_21,l_rot_32,l_rot_31,l_trans_21,l_trans_32,l_trans_31,total\n";
    const TrainResult result = train(samples, cfg, [&](const StepRecord& r) {
        const LossBreakdown& l = r.loss;
        log_file << fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.epoch, r.step, format_real(r.lr),
                                format_real(l.l_rot_21), format_real(l.l_rot_32), format_real(l.l_rot_31),
                                format_real(l.l_trans_21), format_real(l.l_trans_32), format_real(l.l_trans_31),
                                format_real(l.total));
    });
    save_checkpoint(result.network, args.out_dir / "checkpoint.bin");

    const double first = result.history.front().loss.total;
    const double last = result.history.back().loss.total;
    const double ratio = first > 0.0 ? last / first : 0.0;
    log << fmt::format("train: {} steps over {} epochs, loss {} -> {} (ratio {})\n", result.history.size(), cfg.epochs,
                       format_real(first), format_real(last), format_real(ratio));
    return ratio;
}

void cmd_predict(const PredictArgs& args, std::ostream& log) {
    const Network net = load_checkpoint(args.checkpoint);
    const auto frames = load_frame_directory(args.disparity_dir);
    for (const auto& f : frames) {
        if (f.height != net.arch().height || f.width != net.arch().width) {
            throw InputError(fmt::format("frame {} is {}x{} but the checkpoint expects {}x{}", f.frame_index, f.height,
                                         f.width, net.arch().height, net.arch().width));
        }
    }
    const auto motions = predict_sequence(net, frames);
    auto out = open_out(args.out);
    write_motions(out, motions);
    log << fmt::format("predict: {} frames -> {} motions\n", frames.size(), motions.size());
}

void cmd_integrate(const IntegrateArgs& args, std::ostream& log) {
    const auto motions = read_motions(args.motions);
    const auto poses = integrate_trajectory(motions);
    auto out = open_out(args.out);
    write_kitti_poses(out, poses);
    log << fmt::format("integrate: {} motions -> {} poses\n", motions.size(), poses.size());
}

std::string cmd_evaluate(const EvaluateArgs& args, std::ostream& log) {
    if (args.gt.empty() || args.gt.size() != args.pred.size()) {
        throw InputError("evaluate needs matching --gt and --pred lists");
    }
    if (!args.names.empty() && args.names.size() != args.gt.size()) {
        throw InputError("--name must be given once per sequence");
    }
    std::vector<SequenceReport> reports;
    for (std::size_t i = 0; i < args.gt.size(); ++i) {
        const auto gt = read_kitti_poses(args.gt[i]);
        const auto pred = read_kitti_poses(args.pred[i]);
        const std::string id = args.names.empty() ? label_for(args.gt[i]) : args.names[i];
        reports.push_back(evaluate_sequence(gt, pred, id));
        if (reports.back().empty()) log << "evaluate: sequence " << id << " is shorter than 100 m; no segments\n";
    }
    const std::string text = format_sequence_table(summarize(reports, args.run_name));
    if (args.out.empty()) {
        std::cout << text;
    } else {
        auto out = open_out(args.out);
        out << text;
    }
    return text;
}

void cmd_plot(const PlotArgs& args, std::ostream& log) {
    if (args.poses.empty()) throw InputError("plot needs at least one pose file");
    if (!args.labels.empty() && args.labels.size() != args.poses.size()) {
        throw InputError("--label must be given once per pose file");
    }
    std::vector<PlotSeries> series;
    for (std::size_t i = 0; i < args.poses.size(); ++i) {
        PlotSeries s{args.labels.empty() ? label_for(args.poses[i]) : args.labels[i], read_kitti_poses(args.poses[i])};
        if (s.poses.empty()) throw InputError("pose file " + args.poses[i].string() + " is empty");
        series.push_back(std::move(s));
    }
    auto out = open_out(args.out);
    out << render_trajectory_svg(series);
    log << fmt::format("plot: {} trajectories -> {}\n", series.size(), args.out.string());
}

int run(int argc, char** argv) {
    CLI::App app{"Disparity-based frame-to-frame visual odometry toolkit"};
    app.set_config("--config", "", "Key-value configuration file");
    app.require_subcommand(1);

    SynthArgs synth;
    std::string profile = "random";
    auto* sc = app.add_subcommand("synth", "Generate a synthetic disparity sequence with exact poses");
    sc->add_option("--out", synth.out_dir, "Output directory")->required();
    sc->add_option("--seed", synth.seed, "Random seed");
    sc->add_option("--frames", synth.config.frames, "Number of frames");
    sc->add_option("--width", synth.config.width, "Image width");
    sc->add_option("--height", synth.config.height, "Image height");
    sc->add_option("--profile", profile, "Motion profile")->check(CLI::IsMember({"static", "forward", "random"}));
    sc->add_option("--speed", synth.config.speed_mean, "Mean speed [m/frame]");
    sc->add_option("--speed-jitter", synth.config.speed_jitter, "Uniform speed half-width [m/frame]");
    sc->add_option("--turn-rate", synth.config.turn_rate_max, "Max heading change [rad/frame]");
    sc->add_option("--min-boxes", synth.config.min_boxes, "Minimum number of boxes");
    sc->add_option("--max-boxes", synth.config.max_boxes, "Maximum number of boxes");

    PrepareArgs prep;
    bool no_skip = false;
    auto* pc = app.add_subcommand("prepare", "Build the triple/pair manifest from poses and disparity frames");
    pc->add_option("--poses", prep.poses, "KITTI pose file")->required();
    pc->add_option("--disparity-dir", prep.disparity_dir, "Directory of NNNNNN.disp / NNNNNN.pgm frames")->required();
    pc->add_option("--out", prep.out, "Manifest file")->required();
    pc->add_flag("--no-skip-ordering", no_skip, "Only use gap-1 pairs");

    TrainArgs tr;
    bool no_shuffle = false;
    auto* tc = app.add_subcommand("train", "Train the network on a manifest");
    tc->add_option("--manifest", tr.manifest, "Pair manifest")->required();
    tc->add_option("--out", tr.out_dir, "Output directory for checkpoint.bin and loss_log.csv")->required();
    tc->add_option("--seed", tr.config.seed, "Random seed");
    tc->add_option("--epochs", tr.config.epochs, "Epochs (at most 30)");
    tc->add_option("--repeats", tr.config.repeats_per_epoch, "Dataset passes per epoch");
    tc->add_option("--base-lr", tr.config.base_lr, "Learning rate at epoch 0");
    tc->add_option("--alpha", tr.config.loss.alpha, "Rotation loss weight");
    tc->add_flag("--no-shuffle", no_shuffle, "Keep triples in manifest order");

    PredictArgs pr;
    auto* prc = app.add_subcommand("predict", "Predict relative motions for a frame directory");
    prc->add_option("--checkpoint", pr.checkpoint, "Checkpoint file")->required();
    prc->add_option("--disparity-dir", pr.disparity_dir, "Frame directory")->required();
    prc->add_option("--out", pr.out, "Motion file")->required();

    IntegrateArgs in;
    auto* ic = app.add_subcommand("integrate", "Chain relative motions into a KITTI pose file");
    ic->add_option("--motions", in.motions, "Motion file")->required();
    ic->add_option("--out", in.out, "Pose file")->required();

    EvaluateArgs ev;
    auto* ec = app.add_subcommand("evaluate", "KITTI odometry metrics for one or more sequences");
    ec->add_option("--gt", ev.gt, "Ground-truth pose file (repeatable)")->required();
    ec->add_option("--pred", ev.pred, "Predicted pose file (repeatable)")->required();
    ec->add_option("--name", ev.names, "Sequence id (repeatable)");
    ec->add_option("--run-name", ev.run_name, "Run label");
    ec->add_option("--out", ev.out, "Report file (stdout if omitted)");

    PlotArgs pl;
    auto* plc = app.add_subcommand("plot", "Bird's-eye SVG of one or more trajectories");
    plc->add_option("--poses", pl.poses, "Pose file (repeatable)")->required();
    plc->add_option("--label", pl.labels, "Legend label (repeatable)");
    plc->add_option("--out", pl.out, "SVG file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (sc->parsed()) {
            synth.config.profile = profile == "static"    ? MotionProfile::Static
                                   : profile == "forward" ? MotionProfile::Forward
                                                          : MotionProfile::Random;
            cmd_synth(synth, std::cerr);
        } else if (pc->parsed()) {
            prep.skip_ordering = !no_skip;
            cmd_prepare(prep, std::cerr);
        } else if (tc->parsed()) {
            tr.config.shuffle = !no_shuffle;
            cmd_train(tr, std::cerr);
        } else if (prc->parsed()) {
            cmd_predict(pr, std::cerr);
        } else if (ic->parsed()) {
            cmd_integrate(in, std::cerr);
        } else if (ec->parsed()) {
            cmd_evaluate(ev, std::cerr);
        } else if (plc->parsed()) {
            cmd_plot(pl, std::cerr);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace dispvo::cli
