#pragma once

// End-to-end runs: free-mode removal, optional decoupling, spectrum.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "scq/decouple.hpp"
#include "scq/freemode.hpp"
#include "scq/spectrum.hpp"

namespace scq {

enum class PipelineMethod { None, SAD, IOS, FS };

std::string to_string(PipelineMethod m);
PipelineMethod pipeline_method_from_string(const std::string& s);

struct AdaptiveCutoff {
    bool operator==(const AdaptiveCutoff&) const = default;
};
/// Explicit per-mode cutoffs, "adaptive", or a uniform d.
using CutoffSpec = std::variant<std::vector<int>, AdaptiveCutoff, int>;

struct PipelineConfig {
    std::string input_path;
    PipelineMethod method = PipelineMethod::None;
    double free_mode_threshold = kDefaultFreeModeThreshold;
    double epsilon = 1e-17;
    int k = 10;
    CutoffSpec cutoffs = 10;
    std::string output_path;
    int max_sweeps = kDefaultMaxSweeps;

    bool operator==(const PipelineConfig&) const = default;
};

std::string dump_config(const PipelineConfig& c);
PipelineConfig parse_config(const std::string& text);
/// "adaptive", "30" or "30,30".
CutoffSpec parse_cutoff_spec(const std::string& s);

struct PreparedHamiltonian {
    CircuitHamiltonian h;             // after free-mode removal and decoupling
    FreeModeRemoval free;
    std::optional<DecoupleResult> decoupled;
};

PreparedHamiltonian prepare(const CircuitHamiltonian& h, PipelineMethod method,
                            double threshold = kDefaultFreeModeThreshold, int max_sweeps = kDefaultMaxSweeps);

std::vector<int> resolve_cutoffs(const CutoffSpec& spec, int n);

struct PipelineOutput {
    PreparedHamiltonian prepared;
    SpectrumResult spectrum;
    std::optional<AdaptiveResult> adaptive;
};

PipelineOutput run_pipeline(const CircuitHamiltonian& h, const PipelineConfig& config,
                            const SpectrumOptions& opts = {});

}  // namespace scq
