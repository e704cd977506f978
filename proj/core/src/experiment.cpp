#include "nadyn/experiment.hpp"

#include "nadyn/errors.hpp"
#include "nadyn/fit.hpp"
#include "nadyn/io.hpp"
#include "nadyn/numeric.hpp"
#include "nadyn/parallel.hpp"
#include "nadyn/predict.hpp"
#include "nadyn/spectrum.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <sstream>

namespace nadyn {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string_view to_string(Mode mode) {
    switch (mode) {
    case Mode::gap: return "gap";
    case Mode::sweep: return "sweep";
    case Mode::predict: return "predict";
    case Mode::fit: return "fit";
    case Mode::grover: return "grover";
    case Mode::reproduce_figure: return "reproduce-figure";
    }
    return "unknown";
}

Mode parse_mode(std::string_view name) {
    for (Mode m : {Mode::gap, Mode::sweep, Mode::predict, Mode::fit, Mode::grover,
                   Mode::reproduce_figure}) {
        if (to_string(m) == name) return m;
    }
    throw ValidationError("unknown mode '" + std::string(name) +
                          "' (expected gap, sweep, predict, fit, grover or reproduce-figure)");
}

void TauGrid::validate() const {
    if (!(min > 0.0) || !std::isfinite(max)) {
        throw ValidationError("tau_grid.min must be positive");
    }
    if (count < 1) {
        throw ValidationError("tau_grid.count must be >= 1");
    }
    if (count > 1 && !(max > min)) {
        throw ValidationError("tau_grid.max must exceed tau_grid.min when count > 1");
    }
}

std::vector<double> TauGrid::values() const {
    validate();
    if (count == 1) return {min};
    return spacing == Spacing::linear ? numeric::linspace(min, max, count)
                                      : numeric::logspace(min, max, count);
}

void ExperimentConfig::validate() const {
    if (mode != Mode::reproduce_figure) {
        model.validate();
    }
    if (s_grid < 64) {
        throw ValidationError("s_grid must be >= 64");
    }
    tau_grid.validate();
    evolution.validate();
    if (outputs.empty()) {
        throw ValidationError("outputs must name a directory");
    }
    if (mode == Mode::grover && model.kind != ModelKind::grover) {
        throw ValidationError("grover mode needs model.kind = grover");
    }
    if (mode == Mode::reproduce_figure) {
        const auto names = figure_names();
        if (std::find(names.begin(), names.end(), figure) == names.end()) {
            throw ValidationError("unknown figure '" + figure + "' (expected fig3 ... fig10)");
        }
    }
}

namespace {

template <class T>
T get_field(const json& j, const char* key, T fallback) {
    const auto it = j.find(key);
    if (it == j.end()) return fallback;
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw ValidationError(std::string("config field '") + key + "' has the wrong type");
    }
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> known,
                    const char* where) {
    if (!j.is_object()) {
        throw ValidationError(std::string(where) + " must be a JSON object");
    }
    for (const auto& item : j.items()) {
        if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
            throw ValidationError(std::string("unknown key '") + item.key() + "' in " + where);
        }
    }
}

json model_json(const ModelSpec& m) {
    return {{"kind", std::string(to_string(m.kind))},
            {"n", m.n},
            {"mu", m.mu},
            {"alpha", m.alpha},
            {"beta", m.beta},
            {"N", m.big_n},
            {"M", m.big_m}};
}

json snapshot_json(const ExperimentConfig& c) {
    json j;
    j["mode"] = std::string(to_string(c.mode));
    j["model"] = model_json(c.model);
    j["s_grid"] = c.s_grid;
    j["tau_grid"] = {{"min", c.tau_grid.min},
                     {"max", c.tau_grid.max},
                     {"count", c.tau_grid.count},
                     {"spacing", c.tau_grid.spacing == Spacing::linear ? "linear" : "log"}};
    j["evolution"] = {{"method", std::string(to_string(c.evolution.method))},
                      {"step_tolerance", c.evolution.step_tolerance},
                      {"max_steps", c.evolution.max_steps},
                      {"initial_steps", c.evolution.initial_steps}};
    j["fit"] = {{"vary_v", c.fit.vary_v}, {"sweep_csv", c.fit.sweep_csv}};
    j["fit"]["A"] = c.fit.A ? json(*c.fit.A) : json(nullptr);
    j["figure"] = c.figure;
    j["outputs"] = c.outputs;
    return j;
}

} // namespace

ExperimentConfig ExperimentConfig::from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    reject_unknown(j, {"mode", "model", "s_grid", "tau_grid", "evolution", "fit", "figure", "outputs"},
                   "config");
    ExperimentConfig c;
    if (j.contains("mode")) c.mode = parse_mode(get_field<std::string>(j, "mode", ""));
    if (j.contains("model")) {
        const json& m = j["model"];
        reject_unknown(m, {"kind", "n", "mu", "alpha", "beta", "N", "M"}, "model");
        if (m.contains("kind")) c.model.kind = parse_model_kind(get_field<std::string>(m, "kind", ""));
        c.model.n = get_field(m, "n", c.model.n);
        c.model.mu = get_field(m, "mu", c.model.mu);
        c.model.alpha = get_field(m, "alpha", c.model.alpha);
        c.model.beta = get_field(m, "beta", c.model.beta);
        c.model.big_n = get_field(m, "N", c.model.big_n);
        c.model.big_m = get_field(m, "M", c.model.big_m);
    }
    c.s_grid = get_field(j, "s_grid", c.s_grid);
    if (j.contains("tau_grid")) {
        const json& t = j["tau_grid"];
        reject_unknown(t, {"min", "max", "count", "spacing"}, "tau_grid");
        c.tau_grid.min = get_field(t, "min", c.tau_grid.min);
        c.tau_grid.max = get_field(t, "max", c.tau_grid.max);
        c.tau_grid.count = get_field(t, "count", c.tau_grid.count);
        const auto spacing = get_field<std::string>(t, "spacing", "linear");
        if (spacing == "linear") {
            c.tau_grid.spacing = Spacing::linear;
        } else if (spacing == "log") {
            c.tau_grid.spacing = Spacing::log;
        } else {
            throw ValidationError("tau_grid.spacing must be 'linear' or 'log'");
        }
    }
    if (j.contains("evolution")) {
        const json& e = j["evolution"];
        reject_unknown(e, {"method", "step_tolerance", "max_steps", "initial_steps"}, "evolution");
        if (e.contains("method")) c.evolution.method = parse_method(get_field<std::string>(e, "method", ""));
        c.evolution.step_tolerance = get_field(e, "step_tolerance", c.evolution.step_tolerance);
        c.evolution.max_steps = get_field(e, "max_steps", c.evolution.max_steps);
        c.evolution.initial_steps = get_field(e, "initial_steps", c.evolution.initial_steps);
    }
    if (j.contains("fit")) {
        const json& f = j["fit"];
        reject_unknown(f, {"vary_v", "sweep_csv", "A"}, "fit");
        c.fit.vary_v = get_field(f, "vary_v", c.fit.vary_v);
        c.fit.sweep_csv = get_field(f, "sweep_csv", c.fit.sweep_csv);
        if (f.contains("A") && !f["A"].is_null()) c.fit.A = get_field(f, "A", 0.0);
    }
    c.figure = get_field(j, "figure", c.figure);
    c.outputs = get_field(j, "outputs", c.outputs);
    return c;
}

std::string ExperimentConfig::to_json() const { return snapshot_json(*this).dump(2) + "\n"; }

std::string ExperimentConfig::hash() const {
    json j = snapshot_json(*this);
    j.erase("outputs");
    return io::fnv1a_hex(j.dump());
}

namespace {

// Output directory plus the provenance stamped on every file in it.
class Artifacts {
public:
    Artifacts(fs::path dir, const ExperimentConfig& cfg)
        : dir_(std::move(dir)), provenance_{std::string(io::tool_version()), cfg.hash()} {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec || !fs::is_directory(dir_)) {
            throw ValidationError("cannot create output directory '" + dir_.string() + "'");
        }
    }

    const io::Provenance& provenance() const { return provenance_; }
    const fs::path& dir() const { return dir_; }

    void csv(const std::string& name, const std::function<void(std::ostream&)>& body) {
        std::ostringstream text;
        io::write_comment_header(text, provenance_);
        body(text);
        write(name, text.str());
    }

    void json_file(const std::string& name, json j) {
        json out;
        out["tool_version"] = provenance_.tool_version;
        out["config_hash"] = provenance_.config_hash;
        for (auto& item : j.items()) out[item.key()] = item.value();
        write(name, out.dump(2) + "\n");
    }

    void text(const std::string& name, const std::string& body) { write(name, body); }

    RunSummary& summary() { return summary_; }

private:
    void write(const std::string& name, const std::string& body) {
        const fs::path path = dir_ / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << body;
        out.close();
        if (!out) {
            throw ValidationError("cannot write '" + path.string() + "'");
        }
        summary_.files.push_back(path);
    }

    fs::path dir_;
    io::Provenance provenance_;
    RunSummary summary_;
};

json crossing_json(const CrossingParams& c, const GapTrace& trace) {
    const auto [rho0, rho1] = rho_endpoints(trace);
    return {{"kind", std::string(to_string(c.kind))},
            {"s_star", c.s_star},
            {"g", c.g},
            {"v", c.v},
            {"slope_left", c.slope_left},
            {"slope_right", c.slope_right},
            {"core_slope_left", c.core_slope_left},
            {"core_slope_right", c.core_slope_right},
            {"half_width", c.half_width},
            {"omega_minus", c.omega_minus},
            {"omega_plus", c.omega_plus},
            {"omega", c.omega},
            {"rho0", rho0},
            {"rho1", rho1},
            {"adiabatic_time", adiabatic_time_estimate(trace)}};
}

json large_json(const LargeGapParams& p) {
    return {{"rho0", p.rho0}, {"rho1", p.rho1}, {"omega", p.omega}, {"m", p.m}};
}

json split_json(const SplitParams& p) {
    return {{"rho0", p.rho0}, {"rho1", p.rho1}, {"omega_minus", p.omega_minus},
            {"omega_plus", p.omega_plus}, {"A", p.A}, {"g", p.g}, {"v", p.v}, {"m", p.m}};
}

struct Spectrum {
    ReducedHamiltonian model;
    GapTrace trace;
    CrossingParams crossing;
};

Spectrum analyse(const ExperimentConfig& cfg) {
    Spectrum s{build_model(cfg.model), {}, {}};
    GapTraceOptions options;
    options.threads = cfg.threads;
    s.trace = gap_trace(s.model, cfg.s_grid, options);
    s.crossing = locate_crossing(s.model, s.trace);
    return s;
}

void gap_artifacts(Artifacts& out, const Spectrum& s, const std::string& prefix = "") {
    out.csv(prefix + "gap.csv", [&](std::ostream& os) { write_trace_csv(os, s.trace); });
    out.json_file(prefix + "crossing.json", crossing_json(s.crossing, s.trace));
}

// Direct sweep that records every finished tau, so a failure can leave a
// partial CSV behind.
SweepResult sweep(const ExperimentConfig& cfg, const ReducedHamiltonian& model,
                  const std::vector<double>& taus, Artifacts& out, const std::string& name) {
    std::vector<double> probs(taus.size(), 0.0);
    std::vector<std::int64_t> steps(taus.size(), 0);
    std::vector<char> done(taus.size(), 0);
    std::vector<std::exception_ptr> errors(taus.size());
    parallel_for(
        taus.size(),
        [&](std::size_t i) {
            try {
                const EvolutionResult r = evolve_schrodinger(model, taus[i], cfg.evolution);
                probs[i] = transition_probability(r.state, model);
                steps[i] = r.steps;
                done[i] = 1;
            } catch (...) {
                errors[i] = std::current_exception();
            }
        },
        cfg.threads);
    for (std::size_t i = 0; i < taus.size(); ++i) {
        if (!errors[i]) continue;
        out.csv(name + ".partial", [&](std::ostream& os) {
            os << "tau,p_transition,p_ground\n";
            for (std::size_t k = 0; k < taus.size(); ++k) {
                if (!done[k]) continue;
                os << io::format_double(taus[k]) << ',' << io::format_double(probs[k]) << ','
                   << io::format_double(1.0 - probs[k]) << '\n';
            }
        });
        const std::string note = " (completed points written to " +
                                 (out.dir() / (name + ".partial")).string() + ")";
        try {
            std::rethrow_exception(errors[i]);
        } catch (const ValidationError& e) {
            throw ValidationError("sweep failed at tau=" + io::format_double(taus[i]) + ": " +
                                  e.what() + note);
        } catch (const std::exception& e) {
            throw NumericalError("sweep failed at tau=" + io::format_double(taus[i]) + ": " +
                                 e.what() + note);
        }
    }
    SweepResult result;
    result.taus = taus;
    result.probs = std::move(probs);
    result.steps = std::move(steps);
    result.model = model.spec;
    result.config = cfg.evolution;
    out.csv(name, [&](std::ostream& os) { write_sweep_csv(os, result); });
    return result;
}

void prediction_artifacts(Artifacts& out, const std::vector<double>& taus,
                          const std::function<double(double)>& predict, json params,
                          const std::string& prefix = "") {
    std::vector<double> probs(taus.size());
    for (std::size_t i = 0; i < taus.size(); ++i) probs[i] = predict(taus[i]);
    out.csv(prefix + "prediction.csv",
            [&](std::ostream& os) { write_prediction_csv(os, taus, probs); });
    params["tau_range"] = {taus.front(), taus.back()};
    out.json_file(prefix + "prediction.json", std::move(params));
}

// Closed-form curve for the model; split models use `a` as the prefactor.
std::pair<std::function<double(double)>, json> prediction_for(const Spectrum& s, double a) {
    const PredictionInputs inputs = prediction_inputs(s.model, s.trace, s.crossing);
    if (s.model.spec.kind == ModelKind::grover) {
        const auto big_n = s.model.spec.big_n;
        const auto big_m = s.model.spec.big_m;
        return {[=](double tau) { return predict_grover(big_n, big_m, tau); },
                json{{"formula", "grover"}, {"parameters", large_json(inputs.large)}}};
    }
    if (inputs.split) {
        SplitParams p = *inputs.split;
        p.A = a;
        return {[p](double tau) { return predict_split(p, tau); },
                json{{"formula", "split"}, {"parameters", split_json(p)}}};
    }
    const LargeGapParams p = inputs.large;
    return {[p](double tau) { return predict_large_gap(p, tau); },
            json{{"formula", "large_gap"}, {"parameters", large_json(p)}}};
}

struct FitOutcome {
    FitResult fit;
    SplitParams params;
};

FitOutcome fit_artifacts(Artifacts& out, const Spectrum& s, const std::vector<double>& taus,
                         const std::vector<double>& probs, bool vary_v,
                         const std::string& prefix = "") {
    const PredictionInputs inputs = prediction_inputs(s.model, s.trace, s.crossing);
    if (!inputs.split) {
        throw ValidationError("fit needs a model with an avoided crossing (trace reports '" +
                              std::string(to_string(s.crossing.kind)) + "')");
    }
    FitOutcome o;
    o.params = *inputs.split;
    o.fit = vary_v ? fit_A_v(taus, probs, o.params) : fit_A(taus, probs, o.params);
    o.params.A = o.fit.a_hat;
    if (o.fit.v_hat) o.params.v = *o.fit.v_hat;
    const std::string text = fit_result_json(o.fit, o.params, taus, out.provenance());
    out.text(prefix + "fit.json", text);
    std::vector<double> curve(taus.size());
    for (std::size_t i = 0; i < taus.size(); ++i) curve[i] = predict_split(o.params, taus[i]);
    out.csv(prefix + "fit_curve.csv",
            [&](std::ostream& os) { write_prediction_csv(os, taus, curve); });
    return o;
}

// Figure recipes: fixed models with tau windows wide enough to show the
// oscillation pattern of each regime.
struct Panel {
    std::string label;
    ModelSpec model;
    TauGrid taus;
};

ModelSpec qubit_model(ModelKind kind, int n, double mu, double alpha, double beta) {
    ModelSpec m;
    m.kind = kind;
    m.n = n;
    m.mu = mu;
    m.alpha = alpha;
    m.beta = beta;
    return m;
}

std::string mu_label(double mu) {
    std::ostringstream s;
    s << "mu" << mu;
    return s.str();
}

ExperimentConfig panel_config(const ExperimentConfig& base, const Panel& panel) {
    ExperimentConfig c = base;
    c.model = panel.model;
    c.tau_grid = panel.taus;
    return c;
}

} // namespace

RunSummary run_gap(const ExperimentConfig& cfg) {
    cfg.validate();
    Artifacts out(cfg.outputs, cfg);
    const Spectrum s = analyse(cfg);
    gap_artifacts(out, s);
    out.text("config.json", cfg.to_json());
    return out.summary();
}

RunSummary run_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    Artifacts out(cfg.outputs, cfg);
    out.text("config.json", cfg.to_json());
    sweep(cfg, build_model(cfg.model), cfg.tau_grid.values(), out, "sweep.csv");
    return out.summary();
}

RunSummary run_predict(const ExperimentConfig& cfg) {
    cfg.validate();
    Artifacts out(cfg.outputs, cfg);
    out.text("config.json", cfg.to_json());
    const Spectrum s = analyse(cfg);
    auto [curve, params] = prediction_for(s, cfg.fit.A.value_or(0.0));
    prediction_artifacts(out, cfg.tau_grid.values(), curve, std::move(params));
    return out.summary();
}

RunSummary run_fit(const ExperimentConfig& cfg) {
    cfg.validate();
    Artifacts out(cfg.outputs, cfg);
    out.text("config.json", cfg.to_json());
    const Spectrum s = analyse(cfg);
    std::vector<double> taus;
    std::vector<double> probs;
    if (!cfg.fit.sweep_csv.empty()) {
        read_sweep_csv(cfg.fit.sweep_csv, taus, probs);
    } else {
        const SweepResult r = sweep(cfg, s.model, cfg.tau_grid.values(), out, "sweep.csv");
        taus = r.taus;
        probs = r.probs;
    }
    fit_artifacts(out, s, taus, probs, cfg.fit.vary_v);
    return out.summary();
}

RunSummary run_grover(const ExperimentConfig& cfg) {
    cfg.validate();
    Artifacts out(cfg.outputs, cfg);
    out.text("config.json", cfg.to_json());
    const Spectrum s = analyse(cfg);
    const auto big_n = cfg.model.big_n;
    const auto big_m = cfg.model.big_m;
    const auto taus = cfg.tau_grid.values();
    sweep(cfg, s.model, taus, out, "sweep.csv");
    auto [curve, params] = prediction_for(s, 0.0);
    prediction_artifacts(out, taus, curve, std::move(params));
    out.json_file("grover.json", {{"omega", grover_omega(big_n, big_m)},
                                  {"omega_quadrature", s.crossing.omega},
                                  {"rho", grover_rho(big_n, big_m)},
                                  {"period", 1.0 / grover_omega(big_n, big_m)},
                                  {"period_asymptote", grover_period_asymptote(big_n, big_m)}});
    return out.summary();
}

std::vector<std::string> figure_names() {
    return {"fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10"};
}

RunSummary run_reproduce_figure(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::string& name = cfg.figure;
    const fs::path dir = fs::path(cfg.outputs) / name;
    Artifacts out(dir, cfg);
    out.text("config.json", cfg.to_json());

    std::vector<Panel> panels;
    if (name == "fig3") {
        for (double mu : {1.0, 2.0, 4.0}) {
            panels.push_back({mu_label(mu), qubit_model(ModelKind::nobarrier, 1, mu, 0.0, 0.0),
                              {20.0, 100.0, 161, Spacing::linear}});
        }
    } else if (name == "fig4") {
        for (double mu : {1.0, 2.0, 4.0}) {
            panels.push_back({mu_label(mu), qubit_model(ModelKind::barrier, 100, mu, 0.1, 0.1),
                              {10.0, 100.0, 181, Spacing::linear}});
        }
    } else if (name == "fig5") {
        panels.push_back({"", qubit_model(ModelKind::barrier, 84, 1.0, 0.3, 0.5), {}});
    } else if (name == "fig6") {
        for (int n : {16, 32, 48, 64}) {
            panels.push_back({"n" + std::to_string(n),
                              qubit_model(ModelKind::barrier, n, 1.0, 0.3, 0.3),
                              {20.0, 120.0, 101, Spacing::linear}});
        }
    } else if (name == "fig7") {
        // The crossing needs tau ~ 4v / (pi g^2) ~ 350 to turn adiabatic.
        panels.push_back({"", qubit_model(ModelKind::barrier, 84, 1.0, 0.3, 0.5),
                          {100.0, 600.0, 101, Spacing::linear}});
    } else if (name == "fig8") {
        panels.push_back({"", qubit_model(ModelKind::cubic, 30, 1.0, 0.0, 0.0), {}});
    } else if (name == "fig9") {
        panels.push_back({"", qubit_model(ModelKind::cubic, 30, 1.0, 0.0, 0.0),
                          {20.0, 120.0, 201, Spacing::linear}});
    } else if (name == "fig10") {
        ModelSpec m;
        m.kind = ModelKind::grover;
        m.big_n = 64;
        m.big_m = 1;
        panels.push_back({"", m, {10.0, 300.0, 291, Spacing::linear}});
    }

    json bundle;
    bundle["figure"] = name;
    json entries = json::array();
    for (const Panel& panel : panels) {
        const ExperimentConfig pc = panel_config(cfg, panel);
        const std::string prefix = panel.label.empty() ? "" : panel.label + "_";
        const Spectrum s = analyse(pc);
        json entry;
        entry["label"] = panel.label;
        entry["model"] = model_json(panel.model);
        entry["crossing"] = crossing_json(s.crossing, s.trace);
        if (name == "fig5" || name == "fig8") {
            gap_artifacts(out, s, prefix);
            entries.push_back(std::move(entry));
            continue;
        }
        const auto taus = panel.taus.values();
        entry["tau_grid"] = {{"min", panel.taus.min},
                             {"max", panel.taus.max},
                             {"count", panel.taus.count},
                             {"spacing", panel.taus.spacing == Spacing::linear ? "linear" : "log"}};
        const SweepResult data = sweep(pc, s.model, taus, out, prefix + "sweep.csv");
        const bool fitted = name == "fig6" || name == "fig7" || name == "fig9";
        if (fitted) {
            const FitOutcome o =
                fit_artifacts(out, s, data.taus, data.probs, name == "fig9", prefix);
            entry["a_hat"] = o.fit.a_hat;
            entry["v_hat"] = o.fit.v_hat ? json(*o.fit.v_hat) : json(nullptr);
            entry["rms_residual"] = o.fit.rms_residual;
            entry["prediction"] = split_json(o.params);
        } else {
            auto [curve, params] = prediction_for(s, 0.0);
            entry["prediction"] = params;
            prediction_artifacts(out, taus, curve, std::move(params), prefix);
        }
        entries.push_back(std::move(entry));
    }
    bundle["panels"] = std::move(entries);
    out.json_file("bundle.json", std::move(bundle));
    return out.summary();
}

RunSummary run_experiment(const ExperimentConfig& cfg) {
    switch (cfg.mode) {
    case Mode::gap: return run_gap(cfg);
    case Mode::sweep: return run_sweep(cfg);
    case Mode::predict: return run_predict(cfg);
    case Mode::fit: return run_fit(cfg);
    case Mode::grover: return run_grover(cfg);
    case Mode::reproduce_figure: return run_reproduce_figure(cfg);
    }
    throw ValidationError("unknown mode");
}

void read_sweep_csv(const fs::path& path, std::vector<double>& taus, std::vector<double>& probs) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open sweep CSV '" + path.string() +
                              "'; run --mode sweep first or leave fit.sweep_csv empty to "
                              "generate the sweep inline");
    }
    taus.clear();
    probs.clear();
    std::string line;
    bool header = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        if (!header) {
            if (line.rfind("tau,p_transition", 0) != 0) {
                throw ValidationError("sweep CSV '" + path.string() +
                                      "' lacks the tau,p_transition header");
            }
            header = true;
            continue;
        }
        const char* first = line.data();
        const char* last = line.data() + line.size();
        double tau = 0.0;
        double p = 0.0;
        auto r1 = std::from_chars(first, last, tau);
        if (r1.ec != std::errc() || r1.ptr == last || *r1.ptr != ',') {
            throw ValidationError("malformed sweep CSV line " + std::to_string(line_no));
        }
        auto r2 = std::from_chars(r1.ptr + 1, last, p);
        if (r2.ec != std::errc()) {
            throw ValidationError("malformed sweep CSV line " + std::to_string(line_no));
        }
        taus.push_back(tau);
        probs.push_back(p);
    }
    if (!header) {
        throw ValidationError("sweep CSV '" + path.string() + "' is empty");
    }
}

} // namespace nadyn
