// gq_cli: batch front end over the libgq C interface.
//
//   gq_cli build --dist gauss:0,1 --n 16 --r 2 -o q.json
//   gq_cli verify q.json --dist gauss:0,1 --tol 1e-6
//   gq_cli convergence --dist laplace:0,1 --r 2 --dyadic 10 -o conv.csv
//
// Exit codes: 0 ok, 1 usage, 2 construction failure, 3 verification failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gq/gq.h"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kConstruction = 2;
constexpr int kVerification = 3;

using json = nlohmann::ordered_json;

template <class T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};
using ModelPtr = std::unique_ptr<gq_model, Deleter<gq_model, gq_model_free>>;
using ConfigPtr = std::unique_ptr<gq_config, Deleter<gq_config, gq_config_free>>;
using QuantizerPtr = std::unique_ptr<gq_quantizer, Deleter<gq_quantizer, gq_quantizer_free>>;
using ReportPtr = std::unique_ptr<gq_report, Deleter<gq_report, gq_report_free>>;
using TablePtr = std::unique_ptr<gq_table, Deleter<gq_table, gq_table_free>>;

struct Failure {
    int code;
    std::string message;
};

// Bad input maps to a usage error; anything else is a construction failure.
int exit_code_for(gq_status s) {
    switch (s) {
    case GQ_ERR_INVALID_ARGUMENT:
    case GQ_ERR_PARSE:
    case GQ_ERR_IO:
        return kUsage;
    default:
        return kConstruction;
    }
}

void check(gq_status s, const std::string& context) {
    if (s == GQ_OK) return;
    std::string msg = context + ": " + gq_status_string(s);
    if (*gq_last_error()) msg += " (" + std::string(gq_last_error()) + ")";
    throw Failure{exit_code_for(s), msg};
}

std::string take_string(char* s) {
    std::string out(s ? s : "");
    gq_string_free(s);
    return out;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Failure{kUsage, "cannot open " + path + " for writing"};
    os << text;
    if (!os) throw Failure{kUsage, "write to " + path + " failed"};
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Failure{kUsage, "cannot read " + path};
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::string stem_of(const std::string& path) {
    for (const char* ext : {".json", ".csv"}) {
        const std::string e(ext);
        if (path.size() > e.size() && path.compare(path.size() - e.size(), e.size(), e) == 0) {
            return path.substr(0, path.size() - e.size());
        }
    }
    return path;
}

std::string timestamp_utc() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct Session {
    ConfigPtr config;
    json overrides = json::object();
};

Session load_session() {
    Session s;
    gq_config* cfg = nullptr;
    check(gq_config_new(&cfg), "config");
    s.config.reset(cfg);
    if (const char* path = std::getenv("GQ_SEED_CONFIG"); path && *path) {
        check(gq_config_load_file(cfg, path), std::string("GQ_SEED_CONFIG=") + path);
        s.overrides = {{"path", path}, {"values", json::parse(read_file(path), nullptr, false)}};
    }
    return s;
}

ModelPtr load_model(const std::string& spec) {
    gq_model* m = nullptr;
    check(gq_model_parse(spec.c_str(), &m), "--dist " + spec);
    return ModelPtr(m);
}

json manifest_base(const std::string& command, const std::string& dist, double r, const Session& s) {
    json m;
    m["command"] = command;
    m["tool_version"] = gq_version();
    m["timestamp"] = timestamp_utc();
    m["model"] = dist;
    m["r"] = r;
    m["config_overrides"] = s.overrides;
    return m;
}

gq_method parse_method(const std::string& name) {
    if (name == "gersho") return GQ_METHOD_GERSHO;
    if (name == "doubling") return GQ_METHOD_DOUBLING;
    if (name == "lloyd") return GQ_METHOD_LLOYD;
    throw Failure{kUsage, "unknown method " + name};
}

// ---- build ---------------------------------------------------------------

struct BuildArgs {
    std::string dist;
    int n = 0;
    double r = 2.0;
    std::string method = "gersho";
    double eps = 0.5;
    std::string output = "q.json";
};

int cmd_build(const BuildArgs& a) {
    Session session = load_session();
    QuantizerPtr q;
    ReportPtr report;
    const auto start = std::chrono::steady_clock::now();
    if (a.method == "counterexample") {
        gq_quantizer* raw = nullptr;
        check(gq_counterexample(a.n, a.eps, a.r, &raw), "counterexample");
        q.reset(raw);
    } else {
        if (a.dist.empty()) throw Failure{kUsage, "--dist is required"};
        const auto model = load_model(a.dist);
        gq_quantizer* raw = nullptr;
        gq_report* rep = nullptr;
        check(gq_build(model.get(), a.n, a.r, parse_method(a.method), session.config.get(), &raw, &rep), "build");
        q.reset(raw);
        report.reset(rep);
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    char* text = nullptr;
    check(gq_quantizer_to_json(q.get(), &text), "serialize");
    write_file(a.output, take_string(text));

    const std::string stem = stem_of(a.output);
    json outputs = {{"quantizer", a.output}};
    if (report) {
        check(gq_report_to_json(report.get(), &text), "serialize report");
        const std::string report_path = stem + ".report.json";
        write_file(report_path, take_string(text));
        outputs["report"] = report_path;
    }
    const std::string manifest_path = stem + ".manifest.json";
    outputs["manifest"] = manifest_path;

    json manifest = manifest_base("build", a.method == "counterexample" ? "uniform:0,1" : a.dist, a.r, session);
    manifest["method"] = a.method;
    if (a.method == "counterexample") manifest["eps"] = a.eps;
    manifest["levels"] = json::array({a.n});
    manifest["wall_clock_seconds"] = json::array({seconds});
    manifest["outputs"] = outputs;
    write_file(manifest_path, manifest.dump(2) + "\n");

    std::printf("n = %d  D = %.17g\n", gq_quantizer_level(q.get()), gq_quantizer_distortion(q.get()));
    if (report) std::printf("per-cell spread = %.3g\n", gq_report_spread(report.get()));
    std::printf("wrote %s\n", a.output.c_str());
    return kOk;
}

// ---- verify --------------------------------------------------------------

struct VerifyArgs {
    std::string input;
    std::string dist;
    double tol = 1e-6;
};

int cmd_verify(const VerifyArgs& a) {
    Session session = load_session();
    const auto model = load_model(a.dist);
    const std::string text = read_file(a.input);
    gq_quantizer* raw = nullptr;
    check(gq_quantizer_from_json(text.c_str(), model.get(), &raw), a.input);
    QuantizerPtr q(raw);

    const size_t n = static_cast<size_t>(gq_quantizer_level(q.get()));
    std::vector<double> moments(n);
    gq_verification v{};
    check(gq_verify(model.get(), q.get(), a.tol, session.config.get(), &v, moments.data(), moments.size()), "verify");
    const std::string note = gq_last_error();

    auto line = [](const char* name, int ok) { std::printf("%-8s %s\n", name, ok ? "pass" : "FAIL"); };
    line("G1", v.g1);
    line("G2", v.g2);
    line("G3", v.g3);
    line("G4", v.g4);
    line("voronoi", v.voronoi);
    std::printf("distortion      %.17g\n", v.distortion);
    std::printf("per-cell spread %.3e (tol %.3e)\n", v.per_cell_spread, a.tol);
    std::printf("center offset   %.3e\n", v.max_center_offset);
    if (!note.empty()) std::printf("note: %s\n", note.c_str());
    std::printf("cell moments:\n");
    for (size_t i = 0; i < moments.size(); ++i) std::printf("  %zu %.17g\n", i, moments[i]);
    return (v.g1 && v.g2 && v.g3 && v.g4) ? kOk : kVerification;
}

// ---- convergence ---------------------------------------------------------

struct ConvergenceArgs {
    std::string dist;
    double r = 2.0;
    std::vector<int> levels;
    std::optional<int> dyadic;
    std::vector<double> interval;
    std::string method = "gersho";
    int jobs = 1;
    bool rate = false;
    std::string output = "convergence.csv";
};

int cmd_convergence(const ConvergenceArgs& a) {
    Session session = load_session();
    const auto model = load_model(a.dist);

    std::vector<int> levels = a.levels;
    if (a.dyadic) {
        if (*a.dyadic < 0 || *a.dyadic > 30) throw Failure{kUsage, "--dyadic must lie in [0, 30]"};
        levels.clear();
        for (int i = 0; i <= *a.dyadic; ++i) levels.push_back(1 << i);
    }
    if (levels.empty()) throw Failure{kUsage, "give --levels or --dyadic"};
    if (!a.interval.empty() && a.interval.size() != 2) throw Failure{kUsage, "--interval takes lo,hi"};
    const gq_method method = parse_method(a.method);
    if (method == GQ_METHOD_DOUBLING) throw Failure{kUsage, "convergence supports gersho and lloyd"};

    gq_table* raw = nullptr;
    check(gq_convergence(model.get(), a.r, levels.data(), levels.size(), method, session.config.get(), a.jobs, &raw),
          "convergence");
    TablePtr table(raw);

    double c0 = 0.0;
    const bool finite = gq_table_zador(table.get(), &c0) != 0;
    if (finite) {
        std::printf("C0 = %.17g\n", c0);
    } else {
        std::fprintf(stderr, "warning: Zador constant is infinite for %s at r = %g; emitting scaled column only\n",
                     a.dist.c_str(), a.r);
    }

    char* text = nullptr;
    check(gq_table_csv(table.get(), a.rate ? 1 : 0, &text), "csv");
    write_file(a.output, take_string(text));

    const std::string stem = stem_of(a.output);
    json outputs = {{"convergence", a.output}};
    if (!a.interval.empty()) {
        check(gq_table_diagnostics_csv(table.get(), model.get(), a.interval[0], a.interval[1], session.config.get(),
                                       &text),
              "diagnostics");
        const std::string path = stem + ".diagnostics.csv";
        write_file(path, take_string(text));
        outputs["diagnostics"] = path;
    }

    bool any_failed = false;
    json seconds = json::array();
    for (size_t i = 0; i < gq_table_size(table.get()); ++i) {
        gq_convergence_row row{};
        check(gq_table_row(table.get(), i, &row), "row");
        seconds.push_back(row.seconds);
        if (row.failed) {
            any_failed = true;
            std::printf("n = %-6d failed\n", row.n);
        } else if (finite) {
            std::printf("n = %-6d n^r D = %.10g  ratio = %.8f\n", row.n, row.scaled, row.ratio);
        } else {
            std::printf("n = %-6d n^r D = %.10g\n", row.n, row.scaled);
        }
    }

    const std::string manifest_path = stem + ".manifest.json";
    outputs["manifest"] = manifest_path;
    json manifest = manifest_base("convergence", a.dist, a.r, session);
    manifest["method"] = a.method;
    manifest["levels"] = levels;
    manifest["jobs"] = a.jobs;
    if (!a.interval.empty()) manifest["interval"] = a.interval;
    manifest["zador_constant"] = finite ? json(c0) : json(nullptr);
    manifest["wall_clock_seconds"] = seconds;
    manifest["outputs"] = outputs;
    write_file(manifest_path, manifest.dump(2) + "\n");

    std::printf("wrote %s\n", a.output.c_str());
    // Rows fail by construction when C0 is infinite; the warning already covers that.
    return any_failed && finite ? kConstruction : kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gersho quantizer construction, verification and asymptotics"};
    app.set_version_flag("--version", std::string(gq_version()));
    app.require_subcommand(1);

    BuildArgs build;
    auto* b = app.add_subcommand("build", "construct a quantizer and write it as JSON");
    b->add_option("--dist", build.dist, "model spec, e.g. gauss:0,1");
    b->add_option("--n", build.n, "number of levels")->required()->check(CLI::PositiveNumber);
    b->add_option("--r", build.r, "distortion order (> 1)")->capture_default_str();
    b->add_option("--method", build.method, "gersho | doubling | lloyd | counterexample")
        ->check(CLI::IsMember({"gersho", "doubling", "lloyd", "counterexample"}))
        ->capture_default_str();
    b->add_option("--eps", build.eps, "first-cell fraction for the counterexample")->capture_default_str();
    b->add_option("-o,--output", build.output, "quantizer JSON path")->capture_default_str();

    VerifyArgs verify;
    auto* v = app.add_subcommand("verify", "check G1-G4 for a quantizer JSON file");
    v->add_option("input", verify.input, "quantizer JSON")->required();
    v->add_option("--dist", verify.dist, "model spec")->required();
    v->add_option("--tol", verify.tol, "tolerance")->capture_default_str()->check(CLI::PositiveNumber);

    ConvergenceArgs conv;
    auto* c = app.add_subcommand("convergence", "tabulate n^r D_n against the Zador constant");
    c->add_option("--dist", conv.dist, "model spec")->required();
    c->add_option("--r", conv.r, "distortion order (> 1)")->capture_default_str();
    auto* lv = c->add_option("--levels", conv.levels, "comma separated levels")->delimiter(',');
    auto* dy = c->add_option("--dyadic", conv.dyadic, "levels 1, 2, ..., 2^k");
    lv->excludes(dy);
    c->add_option("--interval", conv.interval, "lo,hi for the diagnostics CSV")->delimiter(',')->expected(2);
    c->add_option("--method", conv.method, "gersho | lloyd")
        ->check(CLI::IsMember({"gersho", "lloyd"}))
        ->capture_default_str();
    c->add_option("--jobs", conv.jobs, "worker threads across levels")->capture_default_str()->check(
        CLI::PositiveNumber);
    c->add_flag("--rate", conv.rate, "add the |C0 - n^r D| n / log n column");
    c->add_option("-o,--output", conv.output, "CSV path")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (b->parsed()) return cmd_build(build);
        if (v->parsed()) return cmd_verify(verify);
        return cmd_convergence(conv);
    } catch (const Failure& f) {
        std::fprintf(stderr, "error: %s\n", f.message.c_str());
        if (f.code == kUsage) std::fprintf(stderr, "run with --help for usage\n");
        return f.code;
    }
}
