#include "scq/pipeline.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "scq/errors.hpp"

namespace scq {

using nlohmann::json;

std::string to_string(PipelineMethod m) {
    switch (m) {
        case PipelineMethod::None: return "none";
        case PipelineMethod::SAD: return "sad";
        case PipelineMethod::IOS: return "ios";
        case PipelineMethod::FS: return "fs";
    }
    return "?";
}

PipelineMethod pipeline_method_from_string(const std::string& s) {
    if (s == "none") return PipelineMethod::None;
    if (s == "sad") return PipelineMethod::SAD;
    if (s == "ios") return PipelineMethod::IOS;
    if (s == "fs") return PipelineMethod::FS;
    throw ParseError("unknown method '" + s + "' (expected none, sad, ios or fs)");
}

CutoffSpec parse_cutoff_spec(const std::string& s) {
    if (s == "adaptive") return AdaptiveCutoff{};
    std::vector<int> values;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(item, &used);
            if (used != item.size() || v < 1) throw ParseError("");
            values.push_back(v);
        } catch (const std::exception&) {
            throw ParseError("bad cutoff '" + s + "'");
        }
    }
    if (values.empty()) throw ParseError("bad cutoff '" + s + "'");
    if (values.size() == 1) return values[0];
    return values;
}

std::string dump_config(const PipelineConfig& c) {
    json j;
    j["input_path"] = c.input_path;
    j["method"] = to_string(c.method);
    j["free_mode_threshold"] = c.free_mode_threshold;
    j["epsilon"] = c.epsilon;
    j["k"] = c.k;
    if (const auto* v = std::get_if<std::vector<int>>(&c.cutoffs))
        j["cutoffs"] = *v;
    else if (std::holds_alternative<AdaptiveCutoff>(c.cutoffs))
        j["cutoffs"] = "adaptive";
    else
        j["cutoffs"] = std::get<int>(c.cutoffs);
    j["output_path"] = c.output_path;
    j["max_sweeps"] = c.max_sweeps;
    return j.dump(2) + "\n";
}

PipelineConfig parse_config(const std::string& text) {
    PipelineConfig c;
    try {
        const json j = json::parse(text);
        if (j.contains("input_path")) c.input_path = j["input_path"].get<std::string>();
        if (j.contains("method")) c.method = pipeline_method_from_string(j["method"].get<std::string>());
        if (j.contains("free_mode_threshold")) c.free_mode_threshold = j["free_mode_threshold"].get<double>();
        if (j.contains("epsilon")) c.epsilon = j["epsilon"].get<double>();
        if (j.contains("k")) c.k = j["k"].get<int>();
        if (j.contains("cutoffs")) {
            const json& cj = j["cutoffs"];
            if (cj.is_string())
                c.cutoffs = parse_cutoff_spec(cj.get<std::string>());
            else if (cj.is_array())
                c.cutoffs = cj.get<std::vector<int>>();
            else
                c.cutoffs = cj.get<int>();
        }
        if (j.contains("output_path")) c.output_path = j["output_path"].get<std::string>();
        if (j.contains("max_sweeps")) c.max_sweeps = j["max_sweeps"].get<int>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    return c;
}

PreparedHamiltonian prepare(const CircuitHamiltonian& h, PipelineMethod method, double threshold, int max_sweeps) {
    PreparedHamiltonian p{h, remove_free_modes(h, threshold), std::nullopt};
    p.h = p.free.reduced;
    switch (method) {
        case PipelineMethod::None: break;
        case PipelineMethod::SAD: p.decoupled = simultaneous_approx_diag(p.h, max_sweeps); break;
        case PipelineMethod::IOS: p.decoupled = inductor_symplectic(p.h); break;
        case PipelineMethod::FS: p.decoupled = full_symplectic(p.h); break;
    }
    if (p.decoupled) p.h = p.decoupled->H_out;
    return p;
}

std::vector<int> resolve_cutoffs(const CutoffSpec& spec, int n) {
    if (const auto* v = std::get_if<std::vector<int>>(&spec)) {
        if (static_cast<int>(v->size()) != n)
            throw DimensionError("expected " + std::to_string(n) + " cutoffs, got " + std::to_string(v->size()));
        return *v;
    }
    if (const auto* d = std::get_if<int>(&spec)) return std::vector<int>(n, *d);
    throw ValidationError("adaptive cutoffs have no fixed value");
}

PipelineOutput run_pipeline(const CircuitHamiltonian& h, const PipelineConfig& config, const SpectrumOptions& opts) {
    PipelineOutput out{prepare(h, config.method, config.free_mode_threshold, config.max_sweeps), {}, std::nullopt};
    std::vector<int> cutoffs;
    if (std::holds_alternative<AdaptiveCutoff>(config.cutoffs)) {
        AdaptiveOptions ao;
        ao.epsilon = config.epsilon;
        ao.spectrum = opts;
        ao.spectrum.solver.tol = std::min(opts.solver.tol, AdaptiveOptions{}.spectrum.solver.tol);
        out.adaptive = adaptive_cutoffs(out.prepared.h, ao);
        cutoffs = out.adaptive->cutoffs;
    } else {
        cutoffs = resolve_cutoffs(config.cutoffs, out.prepared.h.n());
    }
    out.spectrum = solve_spectrum(out.prepared.h, cutoffs, config.k, opts);
    return out;
}

}  // namespace scq
