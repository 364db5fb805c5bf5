#include "gearcheck/cli.hpp"

#include "gearcheck/ceeo.hpp"
#include "gearcheck/classify.hpp"
#include "gearcheck/error.hpp"
#include "gearcheck/features.hpp"
#include "gearcheck/model_io.hpp"
#include "gearcheck/report.hpp"
#include "gearcheck/synthgear.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>

namespace gearcheck::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class UsageError : public Error {
public:
    using Error::Error;
};

struct Globals {
    std::uint64_t seed = 0;
    std::string out;
    bool verbose = false;
};

struct SynthFlags {
    double duration = 30.0;
    double noise_std = 0.2;
    double sample_rate = 2048.0;
    int pinion_teeth = 18;
    int gear_teeth = 27;

    GearboxConfig base() const {
        GearboxConfig c;
        c.duration = duration;
        c.noise_std = noise_std;
        c.sample_rate = sample_rate;
        c.pinion_teeth = pinion_teeth;
        c.gear_teeth = gear_teeth;
        return c;
    }

    json echo() const {
        return {{"duration", duration},
                {"noise_std", noise_std},
                {"sample_rate", sample_rate},
                {"pinion_teeth", pinion_teeth},
                {"gear_teeth", gear_teeth}};
    }
};

void add_synth_flags(CLI::App* cmd, SynthFlags& flags) {
    cmd->add_option("--duration", flags.duration, "Record length in seconds")->capture_default_str();
    cmd->add_option("--noise-std", flags.noise_std, "White noise standard deviation")
        ->capture_default_str();
    cmd->add_option("--sample-rate", flags.sample_rate, "Samples per second")->capture_default_str();
    cmd->add_option("--pinion-teeth", flags.pinion_teeth)->capture_default_str();
    cmd->add_option("--gear-teeth", flags.gear_teeth)->capture_default_str();
}

std::optional<double> parse_scale(const std::string& text) {
    if (text == "auto") {
        return std::nullopt;
    }
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size() || !(v > 0.0)) {
            throw UsageError("");
        }
        return v;
    } catch (const std::exception&) {
        throw UsageError("--kernel-scale must be 'auto' or a positive number, got '" + text + "'");
    }
}

std::string lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    out << text;
}

// synth -----------------------------------------------------------------

int cmd_synth(const Globals& g, const SynthFlags& flags, bool parallel, std::ostream& out,
              std::ostream& err) {
    if (g.out.empty()) {
        throw UsageError("synth requires --out DIR");
    }
    const fs::path dir(g.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw DataError("cannot create output directory " + dir.string() + ": " + ec.message());
    }
    const auto base = flags.base();
    const auto signals = make_dataset(base, g.seed, parallel);
    json manifest = json::array();
    for (const auto& s : signals) {
        const auto& meta = s.meta();
        const std::string name = lower(to_string(*meta.health)) + "_m" +
                                 format_number(*meta.motor_freq) + "_l" + format_number(*meta.load) +
                                 ".csv";
        write_signal_csv(dir / name, s);
        manifest.push_back({{"path", name},
                            {"health", to_string(*meta.health)},
                            {"motor_freq", *meta.motor_freq},
                            {"load", *meta.load}});
        if (g.verbose) {
            err << "wrote " << (dir / name).string() << " (" << s.size() << " samples, "
                << meta.source << ")\n";
        }
    }
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");
    out << "wrote " << signals.size() << " signals and manifest.json to " << dir.string() << '\n';
    return kSuccess;
}

// extract ---------------------------------------------------------------

std::vector<std::string> split_list(const std::vector<std::string>& values) {
    std::vector<std::string> out;
    for (const auto& v : values) {
        std::size_t start = 0;
        while (start <= v.size()) {
            const auto comma = v.find(',', start);
            const auto end = comma == std::string::npos ? v.size() : comma;
            if (end > start) {
                out.push_back(v.substr(start, end - start));
            }
            start = end + 1;
        }
    }
    return out;
}

int cmd_extract(const Globals& g, const std::string& input,
                const std::vector<std::string>& preprocess, const std::vector<std::string>& sets,
                std::optional<double> sample_rate, std::ostream& out, std::ostream& err) {
    if (g.out.empty()) {
        throw UsageError("extract requires --out DIR");
    }
    std::vector<OperatorKind> kinds;
    for (const auto& p : split_list(preprocess)) {
        kinds.push_back(parse_operator_kind(p));
    }
    std::vector<FeatureSet> feature_sets;
    for (const auto& s : split_list(sets)) {
        feature_sets.push_back(parse_feature_set(s));
    }
    if (kinds.empty() || feature_sets.empty()) {
        throw UsageError("extract needs at least one --preprocess and one --features value");
    }
    const auto signals = load_signal_set(input, sample_rate);
    const fs::path dir(g.out);
    fs::create_directories(dir);

    bool partial = false;
    for (auto kind : kinds) {
        for (auto set : feature_sets) {
            FeatureTable table;
            table.set = set;
            for (const auto& s : signals) {
                try {
                    table.rows.push_back(extract(s, kind, set));
                } catch (const DataError& e) {
                    partial = true;
                    err << "error: " << s.meta().source << " (" << to_string(kind) << "/"
                        << to_string(set) << "): " << e.what() << '\n';
                }
            }
            const auto path = dir / ("features_" + std::string(to_string(kind)) + "_" +
                                     std::string(to_string(set)) + ".csv");
            write_feature_csv(path, table);
            out << "wrote " << path.string() << " (" << table.rows.size() << " rows x "
                << feature_count(set) << " features)\n";
        }
    }
    return partial ? kDataError : kSuccess;
}

// train -----------------------------------------------------------------

struct TrainFlags {
    std::string features;
    std::string preprocess = "ceeo";
    std::string kernel_scale = "auto";
    double c_penalty = 1.0;
    std::size_t folds = 5;
};

int cmd_train(const Globals& g, const TrainFlags& flags, std::ostream& out, std::ostream& err) {
    if (g.out.empty()) {
        throw UsageError("train requires --out MODEL.json");
    }
    const auto table = read_feature_csv(flags.features);
    const auto data = to_dataset(table);
    const auto fixed_scale = parse_scale(flags.kernel_scale);
    KernelConfig kernel{fixed_scale.value_or(1.0), flags.c_penalty};
    if (!fixed_scale) {
        const auto search = optimize_kernel_scale(data, flags.folds, g.seed, flags.c_penalty);
        kernel = search.best;
        if (g.verbose) {
            for (const auto& t : search.trace) {
                err << "scale " << t.scale << " (x" << t.multiplier << "): cv accuracy "
                    << t.accuracy << '\n';
            }
        }
    }
    ModelFile file;
    file.model = train_mcsvm(data, kernel);
    file.preprocess = parse_operator_kind(flags.preprocess);
    file.feature_set = table.set;
    save_model(g.out, file);
    out << "trained " << file.model.models.size() << " binary machines on " << data.size()
        << " rows (" << data.dims() << " features, kernel scale " << kernel.scale << ") -> "
        << g.out << '\n';
    return kSuccess;
}

// evaluate --------------------------------------------------------------

struct EvaluateFlags {
    std::string input;
    std::size_t folds = 5;
    double c_penalty = 1.0;
    std::string kernel_scale = "auto";
    std::optional<double> sample_rate;
    bool parallel = false;
    bool no_timestamp = false;
};

int cmd_evaluate(const Globals& g, const EvaluateFlags& flags, const SynthFlags& synth,
                 std::ostream& out, std::ostream& err) {
    ComparisonSettings settings;
    settings.folds = flags.folds;
    settings.c_penalty = flags.c_penalty;
    settings.kernel_scale = parse_scale(flags.kernel_scale);
    settings.seed = g.seed;
    settings.parallel = flags.parallel;
    if (settings.folds < 2) {
        throw UsageError("--folds must be at least 2");
    }

    json echo = {{"command", "evaluate"},
                 {"seed", g.seed},
                 {"folds", flags.folds},
                 {"c_penalty", flags.c_penalty},
                 {"kernel_scale", flags.kernel_scale},
                 {"cells", {"raw/time", "raw/combined", "ceeo/time", "ceeo/combined"}}};
    std::vector<Signal> signals;
    if (!flags.input.empty()) {
        echo["input"] = flags.input;
        signals = load_signal_set(flags.input, flags.sample_rate);
    } else {
        echo["input"] = "synthetic";
        echo["synth"] = synth.echo();
        signals = make_dataset(synth.base(), g.seed, flags.parallel);
    }
    if (g.verbose) {
        err << "evaluating " << signals.size() << " signals, " << flags.folds << " folds\n";
    }

    auto report = run_comparison(signals, settings);
    report.config_echo = echo;
    report.timestamp = flags.no_timestamp ? "" : utc_timestamp();

    const fs::path json_path = g.out.empty() ? fs::path("report.json") : fs::path(g.out);
    if (json_path.has_parent_path()) {
        fs::create_directories(json_path.parent_path());
    }
    const auto text = render_report(report);
    write_text(json_path, to_json(report).dump(2) + "\n");
    auto text_path = json_path;
    text_path.replace_extension(".txt");
    write_text(text_path, text);
    out << text;
    out << "\nreport written to " << json_path.string() << " and " << text_path.string() << '\n';

    const bool failed = std::any_of(report.cells.begin(), report.cells.end(),
                                    [](const ReportCell& c) { return !c.ok; });
    if (failed) {
        for (const auto& c : report.cells) {
            if (!c.ok) {
                err << "cell " << to_string(c.preprocess) << "/" << to_string(c.feature_set)
                    << " failed: " << c.error << '\n';
            }
        }
        return kDataError;
    }
    return kSuccess;
}

// diagnose --------------------------------------------------------------

struct DiagnoseFlags {
    std::string model;
    std::vector<std::string> inputs;
    std::string preprocess;
    std::string features;
    std::optional<double> sample_rate;
};

int cmd_diagnose(const Globals& g, const DiagnoseFlags& flags, std::ostream& out,
                 std::ostream& err) {
    const auto file = load_model(flags.model);
    const auto kind = flags.preprocess.empty() ? file.preprocess
                                               : parse_operator_kind(flags.preprocess);
    const auto set = flags.features.empty() ? file.feature_set : parse_feature_set(flags.features);
    if (g.verbose) {
        err << "model: " << file.model.models.size() << " binary machines, preprocess "
            << to_string(kind) << ", features " << to_string(set) << '\n';
    }
    for (const auto& input : flags.inputs) {
        const auto signal = load_signal_csv(input, flags.sample_rate);
        const auto row = extract(signal, kind, set).dense();
        if (row.size() != file.model.input_dims()) {
            throw DataError("feature arity mismatch: model expects " +
                            std::to_string(file.model.input_dims()) + " features, extraction gave " +
                            std::to_string(row.size()));
        }
        const auto p = predict_detailed(file.model, row);
        out << input << ": " << class_name(p.label) << "  votes";
        for (std::size_t c = 0; c < file.model.classes.size(); ++c) {
            out << ' ' << class_name(file.model.classes[c]) << '=' << p.votes[c];
        }
        out << '\n';
    }
    return kSuccess;
}

} // namespace

std::vector<Signal> load_signal_set(const fs::path& input, std::optional<double> sample_rate) {
    if (!fs::exists(input)) {
        throw DataError("input " + input.string() + " does not exist");
    }
    fs::path manifest_path;
    if (fs::is_regular_file(input)) {
        manifest_path = input;
    } else if (fs::exists(input / "manifest.json")) {
        manifest_path = input / "manifest.json";
    }

    std::vector<Signal> signals;
    if (!manifest_path.empty()) {
        std::ifstream in(manifest_path);
        json manifest;
        try {
            manifest = json::parse(in);
        } catch (const json::exception& e) {
            throw DataError("bad manifest " + manifest_path.string() + ": " + e.what());
        }
        if (!manifest.is_array()) {
            throw DataError("manifest must be a JSON array");
        }
        const auto base = manifest_path.parent_path();
        for (const auto& entry : manifest) {
            if (!entry.contains("path")) {
                throw DataError("manifest entry without a path");
            }
            fs::path p = entry.at("path").get<std::string>();
            if (p.is_relative()) {
                p = base / p;
            }
            auto s = load_signal_csv(p, sample_rate);
            auto meta = s.meta();
            if (entry.contains("health")) {
                meta.health = parse_health(entry.at("health").get<std::string>());
            }
            if (entry.contains("motor_freq")) {
                meta.motor_freq = entry.at("motor_freq").get<double>();
            }
            if (entry.contains("load")) {
                meta.load = entry.at("load").get<double>();
            }
            meta.source = entry.at("path").get<std::string>();
            signals.emplace_back(std::vector<double>(s.samples().begin(), s.samples().end()),
                                 s.sample_rate(), std::move(meta));
        }
    } else {
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(input)) {
            if (e.is_regular_file() && e.path().extension() == ".csv") {
                files.push_back(e.path());
            }
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            signals.push_back(load_signal_csv(f, sample_rate));
        }
    }
    if (signals.empty()) {
        throw DataError("no signals found in " + input.string());
    }
    return signals;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"gearcheck: gearbox fault diagnosis from vibration records"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
    app.add_option("--out", g.out, "Output path (directory, model or report file)");
    app.add_flag("-v,--verbose", g.verbose, "Progress messages on stderr");

    SynthFlags synth_flags;
    bool synth_parallel = false;
    auto* synth = app.add_subcommand("synth", "Write the 27-record synthetic gearbox dataset");
    add_synth_flags(synth, synth_flags);
    synth->add_flag("--parallel", synth_parallel);

    std::string extract_input;
    std::vector<std::string> extract_pre{"ceeo"};
    std::vector<std::string> extract_sets{"combined"};
    std::optional<double> extract_rate;
    auto* extract_cmd = app.add_subcommand("extract", "Compute feature tables from signal CSVs");
    extract_cmd->add_option("--input", extract_input, "Manifest or directory of signal CSVs")
        ->required();
    extract_cmd->add_option("--preprocess", extract_pre, "raw, eo, ceeo (comma-separated)")
        ->capture_default_str();
    extract_cmd->add_option("--features", extract_sets, "time, combined (comma-separated)")
        ->capture_default_str();
    extract_cmd->add_option("--sample-rate", extract_rate, "Override sample rate");

    TrainFlags train_flags;
    auto* train = app.add_subcommand("train", "Train a one-vs-one SVM model from a feature CSV");
    train->add_option("--features", train_flags.features, "Labeled feature CSV")->required();
    train->add_option("--preprocess", train_flags.preprocess,
                      "Preprocessing the features were extracted with")
        ->capture_default_str();
    train->add_option("--kernel-scale", train_flags.kernel_scale, "'auto' or a positive value")
        ->capture_default_str();
    train->add_option("--c", train_flags.c_penalty, "Box constraint")->capture_default_str();
    train->add_option("--folds", train_flags.folds, "Folds for the scale search")
        ->capture_default_str();

    EvaluateFlags eval_flags;
    SynthFlags eval_synth;
    auto* evaluate = app.add_subcommand("evaluate", "Run the raw/CEEO x time/combined comparison");
    evaluate->add_option("--input", eval_flags.input,
                         "Manifest or directory of signal CSVs (default: synthesize)");
    evaluate->add_option("--folds", eval_flags.folds)->capture_default_str();
    evaluate->add_option("--c", eval_flags.c_penalty, "Box constraint")->capture_default_str();
    evaluate->add_option("--kernel-scale", eval_flags.kernel_scale, "'auto' or a positive value")
        ->capture_default_str();
    evaluate->add_flag("--parallel", eval_flags.parallel, "Run cells and folds concurrently");
    evaluate->add_flag("--no-timestamp", eval_flags.no_timestamp, "Leave the report timestamp empty");
    add_synth_flags(evaluate, eval_synth);
    // --sample-rate doubles as a header override when reading --input.
    auto* eval_rate = evaluate->get_option("--sample-rate");

    DiagnoseFlags diag_flags;
    auto* diagnose = app.add_subcommand("diagnose", "Classify signal CSVs with a trained model");
    diagnose->add_option("--model", diag_flags.model, "Model JSON")->required();
    diagnose->add_option("inputs", diag_flags.inputs, "Signal CSV files")->required();
    diagnose->add_option("--preprocess", diag_flags.preprocess, "Override the model's preprocessing");
    diagnose->add_option("--features", diag_flags.features, "Override the model's feature set");
    diagnose->add_option("--sample-rate", diag_flags.sample_rate, "Override sample rate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsageError;
    }

    try {
        if (*synth) {
            return cmd_synth(g, synth_flags, synth_parallel, out, err);
        }
        if (*extract_cmd) {
            return cmd_extract(g, extract_input, extract_pre, extract_sets, extract_rate, out, err);
        }
        if (*train) {
            return cmd_train(g, train_flags, out, err);
        }
        if (*evaluate) {
            if (eval_rate->count() > 0) {
                eval_flags.sample_rate = eval_synth.sample_rate;
            }
            return cmd_evaluate(g, eval_flags, eval_synth, out, err);
        }
        if (*diagnose) {
            return cmd_diagnose(g, diag_flags, out, err);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsageError;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return kDataError;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kNumericalError;
    }
    return kUsageError;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<std::string> storage;
    storage.reserve(args.size() + 1);
    storage.emplace_back("gearcheck");
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) {
        argv.push_back(s.data());
    }
    argv.push_back(nullptr);
    return run(static_cast<int>(storage.size()), argv.data(), out, err);
}

} // namespace gearcheck::cli
