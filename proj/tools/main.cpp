#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "signstable/collision.hpp"
#include "signstable/errors.hpp"
#include "signstable/similarity.hpp"
#include "signstable/simulate.hpp"
#include "signstable/sketch.hpp"
#include "signstable/sparse_vector.hpp"
#include "signstable/stable.hpp"
#include "signstable/stats.hpp"

namespace {

using namespace signstable;

constexpr std::uint64_t kDefaultSeed = 1;

// Seeds are passed as text so `--seed random` can opt into entropy; anything
// else must be a plain unsigned integer. Every subcommand prints the value
// it ended up with, so a run is always replayable.
std::uint64_t resolve_seed(const std::string& text) {
    if (text == "random") {
        std::random_device rd;
        return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(text, &pos, 10);
        if (pos != text.size()) throw std::invalid_argument("trailing text");
        return v;
    } catch (const std::exception&) {
        throw ParseError("--seed expects an unsigned integer or 'random', got '" + text + "'");
    }
}

void print_seed(std::uint64_t seed) { std::cerr << "seed: " << seed << "\n"; }

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) parts.push_back(item);
    return parts;
}

std::size_t parse_index(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(s, &pos, 10);
        if (pos != s.size() || v < 1) throw std::invalid_argument("bad");
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw ParseError(std::string(what) + ": expected a 1-based index, got '" + s + "'");
    }
}

std::vector<LabeledVector> load_vectors_checked(const std::string& path) {
    auto vectors = load_vector_file(path);
    if (vectors.empty()) throw ParseError("no vectors in " + path);
    return vectors;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open for writing: " + path);
    return out;
}

// ---------------------------------------------------------------- sample --

void run_sample(double alpha, int beta, double gamma, std::size_t n, std::uint64_t seed) {
    print_seed(seed);
    const StableSampler sampler(StableParams{alpha, beta, gamma});
    const SeededRng rng{seed, 0};
    std::string block;
    for (std::size_t t = 0; t < n; ++t) {
        block += fmt(sampler.sample_at(rng, t));
        block += '\n';
        if (block.size() > 1 << 16) {
            std::cout << block;
            block.clear();
        }
    }
    std::cout << block;
}

// ---------------------------------------------------------------- sketch --

void run_sketch(double alpha, std::uint32_t k, std::uint64_t seed, const std::string& input,
                const std::string& output) {
    print_seed(seed);
    const auto vectors = load_vectors_checked(input);
    std::vector<SparseVector> vecs;
    vecs.reserve(vectors.size());
    for (const auto& lv : vectors) vecs.push_back(lv.vec);

    SketchFileData data;
    data.config = SketchConfig{k, alpha, seed};
    auto sketches = sketch_batch(vecs, data.config);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        data.sketches.push_back({vectors[i].label, std::move(sketches[i])});
    }
    save_sskb(output, data);
    std::cerr << "sketched " << vectors.size() << " vectors (k=" << k << ") -> " << output << "\n";
}

// ---------------------------------------------------------------- stream --

// updates file: header line optional, then rows `t,i,increment` with i a
// 1-based coordinate; t is carried for the caller's bookkeeping only.
void apply_updates(StreamSketchState& state, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open updates file: " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split(line, ',');
        if (fields.size() != 3) {
            throw ParseError("updates line " + std::to_string(line_no) + ": expected t,i,increment");
        }
        if (line_no == 1 && fields[0] == "t") continue;  // header
        const std::size_t i = parse_index(fields[1], "updates coordinate");
        double increment = 0.0;
        try {
            std::size_t pos = 0;
            increment = std::stod(fields[2], &pos);
            if (pos != fields[2].size()) throw std::invalid_argument("trailing text");
        } catch (const std::exception&) {
            throw ParseError("updates line " + std::to_string(line_no) + ": bad increment '" +
                             fields[2] + "'");
        }
        state.update(i - 1, increment);
    }
}

void run_stream(double alpha, std::uint32_t k, std::uint64_t seed, const std::string& updates,
                const std::string& label, const std::string& output) {
    print_seed(seed);
    StreamSketchState state(SketchConfig{k, alpha, seed});
    apply_updates(state, updates);
    std::cout << "sum_counter " << fmt(state.sum_counter()) << "\n";
    if (!output.empty()) {
        SketchFileData data;
        data.config = state.config();
        data.sketches.push_back({label, state.to_sketch()});
        save_sskb(output, data);
        std::cerr << "wrote sketch '" << label << "' -> " << output << "\n";
    }
}

// --------------------------------------------------------------- collide --

BinaryProfile parse_profile(const std::string& text) {
    const auto fields = split(text, ',');
    if (fields.size() != 3) throw ParseError("--binary expects a,b,c");
    std::size_t vals[3];
    for (int i = 0; i < 3; ++i) {
        try {
            std::size_t pos = 0;
            vals[i] = std::stoull(fields[i], &pos, 10);
            if (pos != fields[i].size()) throw std::invalid_argument("trailing text");
        } catch (const std::exception&) {
            throw ParseError("--binary expects nonnegative integers a,b,c");
        }
    }
    return BinaryProfile{vals[0], vals[1], vals[2]};
}

void run_collide(bool have_rho, double rho, const std::string& model,
                 const std::string& binary_text) {
    if (!binary_text.empty()) {
        std::cout << fmt(exact_binary(parse_profile(binary_text))) << "\n";
        return;
    }
    if (!have_rho) throw ParseError("collide: need --rho or --binary");
    double p = 0.0;
    if (model == "bound") {
        p = bound_acos(rho);
    } else if (model == "chi2-1") {
        p = p_chi2_1(rho);
    } else {
        p = p_chi2_2(rho);
    }
    std::cout << fmt(p) << "\n";
}

// ------------------------------------------------------------ similarity --

void run_similarity(const std::string& input, const std::string& measure, double alpha,
                    const std::string& pair_text, bool do_normalize) {
    auto vectors = load_vectors_checked(input);
    if (do_normalize) {
        for (auto& lv : vectors) lv.vec = normalize(lv.vec);
    }

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    if (!pair_text.empty()) {
        const auto fields = split(pair_text, ',');
        if (fields.size() != 2) throw ParseError("--pair expects i,j");
        const std::size_t i = parse_index(fields[0], "--pair");
        const std::size_t j = parse_index(fields[1], "--pair");
        if (i > vectors.size() || j > vectors.size()) throw ParseError("--pair index out of range");
        pairs.emplace_back(i - 1, j - 1);
    } else {
        for (std::size_t i = 0; i < vectors.size(); ++i) {
            for (std::size_t j = i + 1; j < vectors.size(); ++j) pairs.emplace_back(i, j);
        }
    }

    for (const auto& [i, j] : pairs) {
        const auto& u = vectors[i].vec;
        const auto& v = vectors[j].vec;
        double value = 0.0;
        if (measure == "rho2") {
            value = rho_2(u, v);
        } else if (measure == "rho-alpha") {
            value = rho_alpha(u, v, alpha);
        } else if (measure == "rho-chi2") {
            value = rho_chi2(u, v);
        } else if (measure == "d-alpha") {
            value = d_alpha(u, v, alpha);
        } else {
            value = d_chi2(u, v);
        }
        std::cout << vectors[i].label << " " << vectors[j].label << " " << fmt(value) << "\n";
    }
}

// ---------------------------------------------------------------- kernel --

void run_kernel(const std::string& input, const std::string& sketches_path,
                const std::string& kind_text, const std::string& output, double alpha,
                std::uint32_t k, std::uint64_t seed, unsigned threads, bool do_normalize) {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> matrix;

    if (kind_text == "estimated") {
        std::vector<SignSketch> sketches;
        if (!sketches_path.empty()) {
            auto data = load_sskb(sketches_path);
            if (data.sketches.empty()) throw ParseError("no sketches in " + sketches_path);
            for (auto& rec : data.sketches) {
                labels.push_back(rec.label);
                sketches.push_back(std::move(rec.sketch));
            }
        } else {
            if (input.empty()) throw ParseError("kernel: estimated kind needs --input or --sketches");
            print_seed(seed);
            const auto vectors = load_vectors_checked(input);
            std::vector<SparseVector> vecs;
            for (const auto& lv : vectors) {
                labels.push_back(lv.label);
                vecs.push_back(lv.vec);
            }
            sketches = sketch_batch(vecs, SketchConfig{k, alpha, seed});
        }
        matrix = kernel_matrix_estimated(sketches, threads);
    } else {
        if (input.empty()) throw ParseError("kernel: exact kinds need --input");
        auto vectors = load_vectors_checked(input);
        std::vector<SparseVector> vecs;
        for (auto& lv : vectors) {
            labels.push_back(lv.label);
            vecs.push_back(do_normalize ? normalize(lv.vec) : lv.vec);
        }
        const KernelKind kind = kind_text == "chi2" ? KernelKind::chi2 : KernelKind::acos_chi2;
        matrix = kernel_matrix(vecs, kind, threads);
    }

    if (output.empty()) {
        write_kernel_matrix(std::cout, labels, matrix);
    } else {
        auto out = open_output(output);
        write_kernel_matrix(out, labels, matrix);
        std::cerr << "wrote " << matrix.size() << "x" << matrix.size() << " kernel -> " << output
                  << "\n";
    }
}

// -------------------------------------------------------------- simulate --

std::vector<std::pair<std::size_t, std::size_t>> parse_pairs(const std::string& text) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (const auto& part : split(text, ',')) {
        const auto ends = split(part, ':');
        if (ends.size() != 2) throw ParseError("--pairs expects i:j,i:j,...");
        pairs.emplace_back(parse_index(ends[0], "--pairs") - 1,
                           parse_index(ends[1], "--pairs") - 1);
    }
    return pairs;
}

void run_simulate(const SimSpec& spec_in, const std::string& input, const std::string& pairs_text,
                  std::uint32_t k, unsigned threads, const std::string& out_path) {
    print_seed(spec_in.seed);
    if (!input.empty()) {
        // File mode: collision curves for concrete vectors instead of the
        // synthetic grid. Uses the first --alpha entry.
        const auto vectors = load_vectors_checked(input);
        FileExperimentSpec fspec;
        fspec.k = k;
        fspec.alpha = spec_in.alphas.empty() ? 1.0 : spec_in.alphas.front();
        fspec.seed = spec_in.seed;
        if (!pairs_text.empty()) fspec.pairs = parse_pairs(pairs_text);
        const auto points = run_file_experiment(vectors, fspec);
        if (out_path.empty()) {
            write_pairs_csv(std::cout, points);
        } else {
            auto out = open_output(out_path);
            write_pairs_csv(out, points);
            std::cerr << "wrote " << points.size() << " rows -> " << out_path << "\n";
        }
        return;
    }

    SimSpec spec = spec_in;
    if (spec.correlations.empty()) {
        for (int i = 0; i <= 100; ++i) spec.correlations.push_back(i / 100.0);
    }
    const auto points = run_collision_experiment(spec, threads);
    if (out_path.empty()) {
        write_curves_csv(std::cout, points);
    } else {
        auto out = open_output(out_path);
        write_curves_csv(out, points);
        std::cerr << "wrote " << points.size() << " rows -> " << out_path << "\n";
    }
}

// ---------------------------------------------------------------- verify --

struct CheckReporter {
    bool all_ok = true;

    void check(const std::string& name, bool ok, const std::string& detail) {
        std::cout << (ok ? "ok   " : "FAIL ") << name << "  " << detail << "\n";
        all_ok = all_ok && ok;
    }
};

void verify_lemma3(CheckReporter& rep, std::uint64_t seed) {
    const SeededRng rng{seed, 300};
    double min_margin = 1.0;
    int violations = 0;
    const int n_pairs = 2000;
    for (int i = 0; i < n_pairs; ++i) {
        const double sparsity = i % 2 == 0 ? 0.0 : 0.9;
        const double corr = rng.fork(i).uniform_at(0);
        auto [u, v] = generate_pair(200, corr, 1, sparsity, rng.fork(i).fork(1));
        if (u.empty() || v.empty()) continue;
        const auto nu = normalize(u);
        const auto nv = normalize(v);
        const double margin = rho_chi2(nu, nv) - rho_alpha(nu, nv, 1.0);
        min_margin = std::min(min_margin, margin);
        if (margin < 0.0) ++violations;
    }
    rep.check("chi2 similarity dominates rho_1", violations == 0,
              "pairs=" + std::to_string(n_pairs) + " min margin=" + fmt(min_margin));
}

void verify_lemma4(CheckReporter& rep) {
    const double t_star = find_t_star();
    const double z_peak = error_surface(t_star, t_star);
    const double z_axis = error_surface(0.0, 3.0);
    std::cout << "t_star " << fmt(t_star) << "\n";
    std::cout << "Z(t_star) " << fmt(z_peak) << "\n";
    rep.check("t_star location", std::abs(t_star - 2.77935) <= 1e-4, "t_star=" + fmt(t_star));
    rep.check("peak error value", std::abs(z_peak - 0.01919) <= 1e-4, "Z=" + fmt(z_peak));
    rep.check("axis boundary is exact", std::abs(z_axis) <= 1e-9, "Z(0,3)=" + fmt(z_axis));
}

void verify_lemma5(CheckReporter& rep) {
    double min_gap = 1.0;
    for (int i = 0; i <= 1000; ++i) {
        const double rho = i / 1000.0;
        min_gap = std::min(min_gap, p_chi2_1(rho) - p_chi2_2(rho));
    }
    rep.check("second approximation below first", min_gap >= -1e-12,
              "grid=1001 min gap=" + fmt(min_gap));

    const auto roots = g_prime_extrema();
    const double expected[3] = {0.30555, 0.38291, 0.95094};
    bool roots_ok = true;
    double min_g = 1.0;
    for (int i = 0; i < 3; ++i) {
        roots_ok = roots_ok && std::abs(roots[i] - expected[i]) <= 1e-4;
        min_g = std::min(min_g, p_chi2_1(roots[i]) - p_chi2_2(roots[i]));
    }
    rep.check("three stationary points of the gap", roots_ok,
              fmt(roots[0]) + " " + fmt(roots[1]) + " " + fmt(roots[2]));
    rep.check("gap positive at stationary points", min_g > 0.0, "min g=" + fmt(min_g));
}

void verify_bound(CheckReporter& rep, std::uint64_t seed) {
    const SeededRng rng{seed, 400};
    const double alphas[] = {0.5, 1.0, 1.5, 1.8};
    double max_excess = -1.0;
    int cells = 0, ok_cells = 0;
    for (int ai = 0; ai < 4; ++ai) {
        for (int pi = 0; pi < 3; ++pi) {
            const SeededRng cell = rng.fork(ai).fork(pi);
            auto [u, v] = generate_pair(100, cell.uniform_at(0), 1, 0.5, cell.fork(1));
            if (u.empty() || v.empty()) continue;
            const auto mc = collision_mixture_mc(u, v, alphas[ai], 20000, cell.fork(2));
            const double bound = bound_acos(rho_alpha(u, v, alphas[ai]));
            const double excess = mc.value - bound - 3.0 * mc.std_err;
            max_excess = std::max(max_excess, excess);
            ++cells;
            if (excess <= 0.0) ++ok_cells;
        }
    }
    rep.check("mixture probability respects acos bound", ok_cells == cells,
              "cells=" + std::to_string(cells) + " max excess=" + fmt(max_excess));
}

void verify_factorization(CheckReporter& rep, std::uint64_t seed) {
    const SeededRng rng{seed, 500};
    const std::size_t n = 100000;
    const double alphas[] = {0.5, 1.0, 1.5};
    const double crit = ks_critical(0.001, n, n);
    for (int i = 0; i < 3; ++i) {
        const auto fact = sample_factorized(alphas[i], rng.fork(i).fork(1), n);
        const auto direct = sample_stable(StableParams{alphas[i], 0, 1.0}, rng.fork(i).fork(2), n);
        const double d = two_sample_ks(fact, direct);
        rep.check("factorized sampler matches direct (alpha=" + fmt(alphas[i]) + ")", d < crit,
                  "KS=" + fmt(d) + " crit=" + fmt(crit));
    }
}

int run_verify(const std::string& lemma, std::uint64_t seed) {
    print_seed(seed);
    CheckReporter rep;
    if (lemma == "3") {
        verify_lemma3(rep, seed);
    } else if (lemma == "4") {
        verify_lemma4(rep);
    } else if (lemma == "5") {
        verify_lemma5(rep);
    } else if (lemma == "bound") {
        verify_bound(rep, seed);
    } else {
        verify_factorization(rep, seed);
    }
    std::cout << (rep.all_ok ? "PASS" : "FAIL") << "\n";
    return rep.all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sign stable projections: sketching, streaming, and collision analytics"};
    app.require_subcommand(1);

    // sample
    double s_alpha = 2.0, s_gamma = 1.0;
    int s_beta = 0;
    std::size_t s_n = 10;
    std::string s_seed = "1";
    auto* sample_cmd = app.add_subcommand("sample", "Draw alpha-stable variates, one per line");
    sample_cmd->add_option("--alpha", s_alpha, "stability index in (0, 2]")->capture_default_str();
    sample_cmd->add_option("--beta", s_beta, "skewness, 0 or 1")->capture_default_str();
    sample_cmd->add_option("--gamma", s_gamma, "scale > 0")->capture_default_str();
    sample_cmd->add_option("--n", s_n, "number of variates")->required();
    sample_cmd->add_option("--seed", s_seed, "seed (integer or 'random')")->capture_default_str();

    // sketch
    double sk_alpha = 1.0;
    std::uint32_t sk_k = 0;
    std::string sk_seed = "1", sk_input, sk_output;
    auto* sketch_cmd = app.add_subcommand("sketch", "Sign-sketch a vector file into SSKB binary");
    sketch_cmd->add_option("--alpha", sk_alpha, "stability index in (0, 2]")->capture_default_str();
    sketch_cmd->add_option("--k", sk_k, "projections per vector")->required();
    sketch_cmd->add_option("--seed", sk_seed, "master seed (integer or 'random')")
        ->capture_default_str();
    sketch_cmd->add_option("--input", sk_input, "sparse vector text file")->required();
    sketch_cmd->add_option("--output", sk_output, "SSKB output path")->required();

    // stream
    double st_alpha = 1.0;
    std::uint32_t st_k = 0;
    std::string st_seed = "1", st_updates, st_label = "stream", st_output;
    auto* stream_cmd =
        app.add_subcommand("stream", "Maintain one sketch under turnstile updates (t,i,increment)");
    stream_cmd->add_option("--alpha", st_alpha, "stability index in (0, 2]")->capture_default_str();
    stream_cmd->add_option("--k", st_k, "projections")->required();
    stream_cmd->add_option("--seed", st_seed, "master seed (integer or 'random')")
        ->capture_default_str();
    stream_cmd->add_option("--updates", st_updates, "updates CSV path")->required();
    stream_cmd->add_option("--label", st_label, "record label for the output sketch")
        ->capture_default_str();
    stream_cmd->add_option("--output", st_output, "SSKB output path (omit to skip)");

    // collide
    double c_rho = 0.0;
    std::string c_model = "bound", c_binary;
    auto* collide_cmd = app.add_subcommand("collide", "Analytic collision probability");
    auto* rho_opt = collide_cmd->add_option("--rho", c_rho, "similarity in [0, 1]");
    collide_cmd->add_option("--model", c_model, "bound | chi2-1 | chi2-2")
        ->capture_default_str()
        ->check(CLI::IsMember({"bound", "chi2-1", "chi2-2"}));
    auto* bin_opt =
        collide_cmd->add_option("--binary", c_binary, "a,b,c support counts (exact formula)");
    rho_opt->excludes(bin_opt);
    bin_opt->excludes(rho_opt);

    // similarity
    std::string sim_input, sim_measure = "rho-chi2", sim_pair;
    double sim_alpha = 1.0;
    bool sim_normalize = false;
    auto* sim_cmd = app.add_subcommand("similarity", "Pairwise similarity/distance of a vector file");
    sim_cmd->add_option("--input", sim_input, "sparse vector text file")->required();
    sim_cmd->add_option("--measure", sim_measure, "rho2 | rho-alpha | rho-chi2 | d-alpha | d-chi2")
        ->capture_default_str()
        ->check(CLI::IsMember({"rho2", "rho-alpha", "rho-chi2", "d-alpha", "d-chi2"}));
    sim_cmd->add_option("--alpha", sim_alpha, "alpha for rho-alpha / d-alpha")
        ->capture_default_str();
    sim_cmd->add_option("--pair", sim_pair, "single 1-based pair i,j (default: all pairs)");
    sim_cmd->add_flag("--normalize", sim_normalize, "normalize vectors before measuring");

    // kernel
    std::string k_input, k_sketches, k_kind = "chi2", k_output, k_seed = "1";
    double k_alpha = 1.0;
    std::uint32_t k_k = 100000;
    unsigned k_threads = 1;
    bool k_normalize = false;
    auto* kernel_cmd = app.add_subcommand("kernel", "Export a precomputed kernel matrix");
    kernel_cmd->add_option("--input", k_input, "sparse vector text file");
    kernel_cmd->add_option("--sketches", k_sketches, "SSKB file (estimated kind)");
    kernel_cmd->add_option("--kind", k_kind, "chi2 | acos-chi2 | estimated")
        ->capture_default_str()
        ->check(CLI::IsMember({"chi2", "acos-chi2", "estimated"}));
    kernel_cmd->add_option("--output", k_output, "output path (default: stdout)");
    kernel_cmd->add_option("--alpha", k_alpha, "alpha when sketching for the estimated kind")
        ->capture_default_str();
    kernel_cmd->add_option("--k", k_k, "projections when sketching for the estimated kind")
        ->capture_default_str();
    kernel_cmd->add_option("--seed", k_seed, "seed (integer or 'random')")->capture_default_str();
    kernel_cmd->add_option("--threads", k_threads, "worker threads")->capture_default_str();
    kernel_cmd->add_flag("--normalize", k_normalize, "normalize vectors first");

    // simulate
    SimSpec sim_spec;
    sim_spec.alphas = {1.0};
    std::string mc_seed = "1", mc_input, mc_pairs, mc_out;
    std::uint32_t mc_k = 100000;
    unsigned mc_threads = 1;
    auto* simulate_cmd =
        app.add_subcommand("simulate", "Collision-probability curves (synthetic grid or file pairs)");
    simulate_cmd->add_option("--D", sim_spec.dim, "dimension")->capture_default_str();
    simulate_cmd->add_option("--df", sim_spec.df, "t-distribution degrees of freedom")
        ->capture_default_str();
    simulate_cmd->add_option("--alpha", sim_spec.alphas, "stability indices (comma separated)")
        ->delimiter(',')
        ->capture_default_str();
    simulate_cmd->add_option("--sparsity", sim_spec.sparsity, "fraction of entries zeroed")
        ->capture_default_str();
    simulate_cmd->add_option("--reps", sim_spec.repetitions, "sign trials per grid cell")
        ->capture_default_str();
    simulate_cmd
        ->add_option("--correlations", sim_spec.correlations,
                     "grid values (default 0,0.01,...,1)")
        ->delimiter(',');
    simulate_cmd->add_option("--seed", mc_seed, "seed (integer or 'random')")->capture_default_str();
    simulate_cmd->add_option("--threads", mc_threads, "worker threads")->capture_default_str();
    simulate_cmd->add_option("--out", mc_out, "CSV output path (default: stdout)");
    simulate_cmd->add_option("--input", mc_input, "vector file: score file pairs instead");
    simulate_cmd->add_option("--pairs", mc_pairs, "file mode: 1-based pairs i:j,i:j");
    simulate_cmd->add_option("--k", mc_k, "file mode: shared projections")->capture_default_str();

    // verify
    std::string v_lemma, v_seed = "1";
    auto* verify_cmd = app.add_subcommand("verify", "Check the analytic claims, print margins");
    verify_cmd->add_option("--lemma", v_lemma, "3 | 4 | 5 | bound | factorization")
        ->required()
        ->check(CLI::IsMember({"3", "4", "5", "bound", "factorization"}));
    verify_cmd->add_option("--seed", v_seed, "seed (integer or 'random')")->capture_default_str();

    try {
        app.parse(argc, argv);

        if (sample_cmd->parsed()) {
            run_sample(s_alpha, s_beta, s_gamma, s_n, resolve_seed(s_seed));
        } else if (sketch_cmd->parsed()) {
            run_sketch(sk_alpha, sk_k, resolve_seed(sk_seed), sk_input, sk_output);
        } else if (stream_cmd->parsed()) {
            run_stream(st_alpha, st_k, resolve_seed(st_seed), st_updates, st_label, st_output);
        } else if (collide_cmd->parsed()) {
            run_collide(rho_opt->count() > 0, c_rho, c_model, c_binary);
        } else if (sim_cmd->parsed()) {
            run_similarity(sim_input, sim_measure, sim_alpha, sim_pair, sim_normalize);
        } else if (kernel_cmd->parsed()) {
            run_kernel(k_input, k_sketches, k_kind, k_output, k_alpha, k_k, resolve_seed(k_seed),
                       k_threads, k_normalize);
        } else if (simulate_cmd->parsed()) {
            sim_spec.seed = resolve_seed(mc_seed);
            run_simulate(sim_spec, mc_input, mc_pairs, mc_k, mc_threads, mc_out);
        } else if (verify_cmd->parsed()) {
            return run_verify(v_lemma, resolve_seed(v_seed));
        }
        return 0;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
