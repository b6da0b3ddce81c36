// scq: command-line front end for the circuit Hamiltonian library.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "scq/errors.hpp"
#include "scq/io.hpp"
#include "scq/pipeline.hpp"

using namespace scq;

namespace {

// 3 significant figures, e.g. 2.87e5.
std::string short_sci(double v) {
    if (v == 0.0) return "0";
    int e = static_cast<int>(std::floor(std::log10(std::abs(v))));
    double m = v / std::pow(10.0, e);
    if (std::abs(std::round(m * 100) / 100) >= 10.0) {
        m /= 10.0;
        ++e;
    }
    char buf[32];
    if (e >= -2 && e <= 3) {
        std::snprintf(buf, sizeof buf, "%.3g", v);
        return buf;
    }
    std::snprintf(buf, sizeof buf, "%.2fe%d", m, e);
    return buf;
}

std::string transform_path(const std::string& output) {
    const std::string ext = ".json";
    if (output.size() > ext.size() && output.compare(output.size() - ext.size(), ext.size(), ext) == 0)
        return output.substr(0, output.size() - ext.size()) + ".transform.json";
    return output + ".transform.json";
}

void emit(const std::string& text, const std::string& output) {
    if (output.empty())
        std::cout << text;
    else
        write_file(output, text);
}

std::string join(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

struct Options {
    std::string input, output, config, method = "none", cutoff;
    int k = -1;
    int max_sweeps = -1;
    int state = 0;
    int d_init = 8, d_max = 100;
    double epsilon = -1.0, threshold = -1.0;
};

PipelineConfig make_config(const Options& o) {
    PipelineConfig c;
    if (!o.config.empty()) c = parse_config(read_file(o.config));
    if (!o.input.empty()) c.input_path = o.input;
    if (!o.output.empty()) c.output_path = o.output;
    if (o.method != "none" || o.config.empty()) c.method = pipeline_method_from_string(o.method);
    if (o.k > 0) c.k = o.k;
    if (o.epsilon > 0) c.epsilon = o.epsilon;
    if (o.threshold > 0) c.free_mode_threshold = o.threshold;
    if (o.max_sweeps > 0) c.max_sweeps = o.max_sweeps;
    if (!o.cutoff.empty()) c.cutoffs = parse_cutoff_spec(o.cutoff);
    if (c.input_path.empty()) throw ValidationError("--input is required");
    return c;
}

int cmd_inspect(const Options& o) {
    const CircuitHamiltonian h = load_hamiltonian(o.input);
    const ValidationReport r = validate(h);
    const double thr = o.threshold > 0 ? o.threshold : kDefaultFreeModeThreshold;
    const FreeModeReport fm = count_free_modes(h, thr);
    std::cout << "n=" << h.n() << ", n_J=" << h.n_junction_modes() << ", F=" << fm.F
              << ", offdiag=" << short_sci(offdiag_norm(h)) << "\n";
    std::cout << "modes:";
    for (ModeKind k : h.kinds) std::cout << ' ' << to_string(k);
    std::cout << "\nvalidation: " << r.summary() << "\n";
    return r.ok() ? 0 : 1;
}

int cmd_remove_free(const Options& o) {
    if (o.output.empty()) throw ValidationError("--output is required");
    const CircuitHamiltonian h = load_hamiltonian(o.input);
    const FreeModeRemoval r = remove_free_modes(h, o.threshold > 0 ? o.threshold : kDefaultFreeModeThreshold);
    save_hamiltonian(r.reduced, o.output);
    save_transform(r.transform, transform_path(o.output));
    std::cerr << "F=" << r.report.F << ", reduced n=" << r.reduced.n() << "\n";
    return 0;
}

int cmd_decouple(const Options& o) {
    const CircuitHamiltonian h = load_hamiltonian(o.input);
    DecoupleResult r = [&] {
        if (o.method == "sad") return simultaneous_approx_diag(h, o.max_sweeps > 0 ? o.max_sweeps : kDefaultMaxSweeps);
        if (o.method == "ios") return inductor_symplectic(h);
        if (o.method == "fs") return full_symplectic(h);
        throw ParseError("decouple needs --method sad, ios or fs");
    }();
    if (!o.output.empty()) {
        save_hamiltonian(r.H_out, o.output);
        save_transform(r.T, transform_path(o.output));
    }
    CsvWriter csv({"offdiag_before", "offdiag_after", "sweeps"});
    csv.row({r.offdiag_before, r.offdiag_after, static_cast<double>(r.iterations)});
    std::cout << csv.str();
    return 0;
}

int cmd_spectrum(const Options& o) {
    const PipelineConfig c = make_config(o);
    const PipelineOutput out = run_pipeline(load_hamiltonian(c.input_path), c);
    std::cerr << "cutoffs: " << join(out.spectrum.cutoffs) << "\n";
    CsvWriter csv({"level", "energy", "residual"});
    for (Eigen::Index i = 0; i < out.spectrum.eigenvalues.size(); ++i)
        csv.row({static_cast<double>(i), out.spectrum.eigenvalues(i), out.spectrum.residuals(i)});
    emit(csv.str(), c.output_path);
    return 0;
}

int cmd_converge(const Options& o) {
    PipelineConfig c = make_config(o);
    const PreparedHamiltonian p = prepare(load_hamiltonian(c.input_path), c.method, c.free_mode_threshold, c.max_sweeps);
    std::vector<int> ds;
    if (const auto* v = std::get_if<std::vector<int>>(&c.cutoffs))
        ds = *v;
    else if (const auto* d = std::get_if<int>(&c.cutoffs))
        for (int x = 2; x <= *d; ++x) ds.push_back(x);
    else
        throw ValidationError("converge needs --cutoff d or a list d1,d2,...");
    int k = c.k;
    for (int d : ds) {
        long dim = 1;
        for (int i = 0; i < p.h.n(); ++i) dim *= d;
        if (dim < k) throw ValidationError("cutoff " + std::to_string(d) + " gives fewer than k states");
    }
    std::vector<std::string> header{"d"};
    for (int i = 0; i < k; ++i) header.push_back("E" + std::to_string(i));
    CsvWriter csv(header);
    for (const ConvergenceRow& row : spectrum_vs_cutoff(p.h, k, ds)) {
        std::vector<double> values{static_cast<double>(row.d)};
        for (Eigen::Index i = 0; i < row.energies.size(); ++i) values.push_back(row.energies(i));
        csv.row(values);
    }
    emit(csv.str(), c.output_path);
    return 0;
}

int cmd_rdm(const Options& o) {
    PipelineConfig c = make_config(o);
    c.k = std::max(c.k, o.state + 1);
    if (o.k <= 0) c.k = o.state + 1;
    const PipelineOutput out = run_pipeline(load_hamiltonian(c.input_path), c);
    CsvWriter csv({"mode", "m", "population"});
    for (int mode = 0; mode < out.prepared.h.n(); ++mode) {
        const Vector p = reduced_density_matrix(out.spectrum, o.state, mode).populations();
        for (Eigen::Index m = 0; m < p.size(); ++m) csv.row({static_cast<double>(mode), static_cast<double>(m), p(m)});
    }
    emit(csv.str(), c.output_path);
    return 0;
}

int cmd_adaptive(const Options& o) {
    const PipelineConfig c = make_config(o);
    const PreparedHamiltonian p = prepare(load_hamiltonian(c.input_path), c.method, c.free_mode_threshold, c.max_sweeps);
    AdaptiveOptions ao;
    ao.epsilon = c.epsilon;
    ao.d_init = o.d_init;
    ao.d_max = o.d_max;
    const AdaptiveResult r = adaptive_cutoffs(p.h, ao);
    std::cerr << "cutoffs: " << join(r.cutoffs) << " after " << r.rounds << " rounds"
              << (r.converged ? "" : " (not converged)") << "\n";
    CsvWriter csv({"mode", "cutoff", "probe_population"});
    for (std::size_t k = 0; k < r.cutoffs.size(); ++k) {
        const Vector& pop = r.populations[k];
        const double probe = r.cutoffs[k] < pop.size() ? pop(r.cutoffs[k]) : 0.0;
        csv.row({static_cast<double>(k), static_cast<double>(r.cutoffs[k]), probe});
    }
    emit(csv.str(), c.output_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Superconducting circuit Hamiltonians: free modes, decoupling, spectra"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--input", o.input, "Hamiltonian JSON file")->required();
        sub->add_option("--output", o.output, "Output file");
        sub->add_option("--threshold", o.threshold, "Free-mode threshold");
    };
    auto add_pipeline = [&](CLI::App* sub) {
        sub->add_option("--method", o.method, "none, sad, ios or fs");
        sub->add_option("--cutoff", o.cutoff, "Uniform d, per-mode list, or 'adaptive'");
        sub->add_option("--k", o.k, "Number of levels");
        sub->add_option("--epsilon", o.epsilon, "Population threshold for adaptive cutoffs");
        sub->add_option("--max-sweeps", o.max_sweeps, "SAD sweep limit");
        sub->add_option("--config", o.config, "Pipeline config JSON");
    };

    auto* inspect = app.add_subcommand("inspect", "Print dimensions, free modes and off-diagonal norm");
    add_common(inspect);
    auto* remove = app.add_subcommand("remove-free", "Eliminate free modes");
    add_common(remove);
    auto* dec = app.add_subcommand("decouple", "Apply a decoupling transformation");
    add_common(dec);
    dec->add_option("--method", o.method, "sad, ios or fs")->required();
    dec->add_option("--max-sweeps", o.max_sweeps, "SAD sweep limit");
    auto* spec = app.add_subcommand("spectrum", "Lowest eigenvalues as CSV");
    add_common(spec);
    add_pipeline(spec);
    auto* conv = app.add_subcommand("converge", "Eigenvalues versus uniform cutoff as CSV");
    add_common(conv);
    add_pipeline(conv);
    auto* rdm = app.add_subcommand("rdm", "Reduced density matrix populations as CSV");
    add_common(rdm);
    add_pipeline(rdm);
    rdm->add_option("--state", o.state, "Eigenstate index");
    auto* adapt = app.add_subcommand("adaptive-cutoffs", "Select per-mode cutoffs from ground-state populations");
    add_common(adapt);
    add_pipeline(adapt);
    adapt->add_option("--d-init", o.d_init, "Initial working basis size");
    adapt->add_option("--d-max", o.d_max, "Largest allowed cutoff");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*inspect) return cmd_inspect(o);
        if (*remove) return cmd_remove_free(o);
        if (*dec) return cmd_decouple(o);
        if (*spec) return cmd_spectrum(o);
        if (*conv) return cmd_converge(o);
        if (*rdm) return cmd_rdm(o);
        if (*adapt) return cmd_adaptive(o);
    } catch (const CutoffExceededError& e) {
        std::cerr << "error: " << e.what() << " (mode " << e.mode() << ")\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
