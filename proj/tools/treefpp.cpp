// treefpp: level quotients, fixed-point proportions, and contraction checks
// for self-similar groups given by wreath recursions or finite-type patterns.

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "treefpp/serialize.hpp"
#include "treefpp/zoo.hpp"

using namespace treefpp;

namespace {

std::string hex64_string(uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string word_str(const GroupPresentation* G, const GenWord& w) {
    if (w.empty()) return "1";
    if (G) return G->format(w);
    return "?";
}

std::string vertex_str(const std::vector<uint8_t>& v) {
    if (v.empty()) return "(root)";
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += '.';
        out += std::to_string(int(v[i]) + 1);
    }
    return out;
}

std::vector<uint8_t> parse_vertex(const std::string& text, int degree) {
    std::vector<uint8_t> out;
    if (text.empty()) return out;
    size_t pos = 0;
    while (true) {
        size_t dot = text.find('.', pos);
        std::string piece = text.substr(pos, dot == std::string::npos ? std::string::npos
                                                                      : dot - pos);
        size_t used = 0;
        long letter = 0;
        try {
            letter = std::stol(piece, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad vertex path '" + text + "'");
        }
        if (used != piece.size() || letter < 1 || letter > degree)
            throw std::invalid_argument("vertex letter out of range in '" + text + "'");
        out.push_back(uint8_t(letter - 1));
        if (dot == std::string::npos) break;
        pos = dot + 1;
    }
    return out;
}

std::filesystem::path cache_directory(const std::string& flag_value) {
    if (const char* env = std::getenv("TREEFPP_CACHE"); env && *env) return env;
    return flag_value;
}

std::shared_ptr<PresentationSource> presentation_source(const GroupHandle& h) {
    if (!h.presentation()) return nullptr;
    return std::dynamic_pointer_cast<PresentationSource>(h.source());
}

void preload_quotients(const GroupHandle& h, const std::filesystem::path& dir,
                       int max_level) {
    auto src = presentation_source(h);
    if (!src || dir.empty()) return;
    for (int k = 1; k <= max_level; ++k) {
        auto q = load_quotient_cache(quotient_cache_path(dir, *h.presentation(), k),
                                     h.presentation());
        if (q) src->adopt(std::move(q));
    }
}

void store_quotients(const GroupHandle& h, const std::filesystem::path& dir) {
    auto src = presentation_source(h);
    if (!src || dir.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    for (const auto& [level, q] : src->cached()) {
        auto path = quotient_cache_path(dir, *h.presentation(), level);
        if (!std::filesystem::exists(path, ec)) save_quotient_cache(path, *q);
    }
}

Json group_json(const ZooEntry& e) {
    Json g;
    g["key"] = e.handle.key();
    g["degree"] = e.handle.degree();
    if (auto pres = e.handle.presentation()) {
        g["kind"] = "presentation";
        g["name"] = pres->name();
        g["generators"] = pres->generator_names();
    } else {
        const FiniteTypeSpec* spec = e.handle.finite_type();
        g["kind"] = spec->kind() == FiniteTypeKind::IteratedWreath ? "iterated-wreath"
                                                                   : "coset-type";
        g["top_group_order"] = spec->group_elements().size();
        g["subgroup_order"] = spec->subgroup_elements().size();
        g["coset_count"] = spec->cosets().size();
    }
    g["description"] = e.description;
    return g;
}

// Prints the fingerprint and writes the requested files; the caller picks the
// exit code from the verdicts.
void finish(Report& report, double elapsed, const std::string& out_path,
            const std::string& csv_path, const std::string* csv_text) {
    report.elapsed_seconds = elapsed;
    finalize_report(report);
    std::printf("fingerprint %s\n", hex64_string(report.fingerprint).c_str());
    if (!out_path.empty()) write_text_file(out_path, report_string(report));
    if (!csv_path.empty() && csv_text) write_text_file(csv_path, *csv_text);
}

void print_fpp_entry(const FppEntry& e) {
    if (e.exact_value) {
        std::printf("level %2d  %-18s  %.12g  [%s]\n", e.level,
                    rational_string(*e.exact_value).c_str(),
                    rational_double(*e.exact_value), e.provenance.c_str());
    } else if (e.mc) {
        std::printf("level %2d  %.6f +/- %.6f  (%llu samples)  [%s]\n", e.level,
                    e.mc->estimate, e.mc->std_error,
                    static_cast<unsigned long long>(e.mc->samples), e.provenance.c_str());
    } else if (e.enclosure) {
        std::printf("level %2d  %.12f width %.3e  [%s]\n", e.level,
                    rational_double(e.enclosure->midpoint()),
                    rational_double(e.enclosure->width()), e.provenance.c_str());
    }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"self-similar groups on rooted trees: quotients, fixed-point "
                 "proportions, nuclei"};
    app.require_subcommand(1);

    const std::map<std::string, FppMode> mode_names{{"exact", FppMode::Exact},
                                                    {"mc", FppMode::Mc},
                                                    {"recursion", FppMode::Recursion},
                                                    {"auto", FppMode::Auto}};
    const std::map<std::string, CheckRoute> route_names{
        {"auto", CheckRoute::Auto},
        {"enumerate", CheckRoute::Enumerate},
        {"stabilizer-words", CheckRoute::StabilizerWords}};

    auto* cmd_zoo = app.add_subcommand("zoo", "built-in group catalogue");
    cmd_zoo->require_subcommand(1);
    cmd_zoo->add_subcommand("list", "list the known group keys");

    // fpp
    auto* cmd_fpp = app.add_subcommand("fpp", "fixed-point proportion series");
    std::string fpp_group, fpp_out, fpp_csv, fpp_cache;
    int fpp_max_level = 1, fpp_threads = 1;
    FppMode fpp_mode = FppMode::Auto;
    uint64_t fpp_limit = kDefaultElementLimit, fpp_samples = 50000;
    uint64_t fpp_walk = 0, fpp_seed = 0;
    cmd_fpp->add_option("--group", fpp_group, "group key (see `zoo list`)")->required();
    cmd_fpp->add_option("--max-level", fpp_max_level, "deepest level n")
        ->check(CLI::Range(1, 64));
    cmd_fpp->add_option("--mode", fpp_mode, "exact|mc|recursion|auto")
        ->transform(CLI::CheckedTransformer(mode_names, CLI::ignore_case));
    cmd_fpp->add_option("--samples", fpp_samples, "walk samples per level (mc)");
    auto* fpp_walk_opt =
        cmd_fpp->add_option("--walk-length", fpp_walk, "walk steps (default 16*level)");
    auto* fpp_seed_opt = cmd_fpp->add_option("--seed", fpp_seed, "root seed (mc)");
    cmd_fpp->add_option("--element-limit", fpp_limit, "largest quotient to enumerate");
    cmd_fpp->add_option("--threads", fpp_threads, "enumeration threads")
        ->check(CLI::Range(1, 64));
    cmd_fpp->add_option("--out", fpp_out, "write the JSON report here");
    cmd_fpp->add_option("--csv", fpp_csv, "write the series as CSV here");
    cmd_fpp->add_option("--cache", fpp_cache,
                        "quotient cache directory (TREEFPP_CACHE overrides)");

    // check
    auto* cmd_check = app.add_subcommand("check", "structural property checks");
    std::string chk_group, chk_property, chk_out, chk_cache;
    int chk_stab = 1, chk_target = 1, chk_max_level = 0, chk_threads = 1;
    CheckRoute chk_route = CheckRoute::Auto;
    uint64_t chk_limit = kDefaultElementLimit;
    cmd_check->add_option("--group", chk_group, "group key")->required();
    cmd_check
        ->add_option("--property", chk_property,
                     "fractal|strongly-fractal|ssf|martingale|transitive")
        ->required()
        ->check(CLI::IsMember(
            {"fractal", "strongly-fractal", "ssf", "martingale", "transitive"}));
    cmd_check->add_option("--stab-levels", chk_stab, "largest stabilizer level K")
        ->check(CLI::Range(1, 16));
    cmd_check->add_option("--target-level", chk_target, "section image depth m")
        ->check(CLI::Range(1, 16));
    cmd_check->add_option("--max-level", chk_max_level,
                          "levels for martingale (default 3) or transitive (default 4)");
    cmd_check->add_option("--route", chk_route, "auto|enumerate|stabilizer-words")
        ->transform(CLI::CheckedTransformer(route_names, CLI::ignore_case));
    cmd_check->add_option("--element-limit", chk_limit, "largest quotient to enumerate");
    cmd_check->add_option("--threads", chk_threads, "enumeration threads")
        ->check(CLI::Range(1, 64));
    cmd_check->add_option("--out", chk_out, "write the JSON report here");
    cmd_check->add_option("--cache", chk_cache,
                          "quotient cache directory (TREEFPP_CACHE overrides)");

    // nucleus
    auto* cmd_nuc = app.add_subcommand("nucleus", "compute the nucleus");
    std::string nuc_group, nuc_out;
    NucleusCaps nuc_caps;
    cmd_nuc->add_option("--group", nuc_group, "group key (presentation groups only)")
        ->required();
    cmd_nuc->add_option("--depth-cap", nuc_caps.depth_cap,
                        "per-product section exploration budget");
    cmd_nuc->add_option("--pair-cap", nuc_caps.pair_cap, "total products examined");
    cmd_nuc->add_option("--element-cap", nuc_caps.element_cap, "working set bound");
    cmd_nuc->add_option("--out", nuc_out, "write the JSON report here");

    // jones-check
    auto* cmd_jones = app.add_subcommand("jones-check",
                                         "null fixed-point proportion criterion");
    std::string jon_group, jon_out;
    JonesConfig jon_config;
    cmd_jones->add_option("--group", jon_group, "group key (presentation groups only)")
        ->required();
    cmd_jones->add_option("--transitivity-level", jon_config.transitivity_level,
                          "levels of transitivity to verify");
    cmd_jones->add_option("--martingale-level", jon_config.martingale_level,
                          "martingale condition depth");
    cmd_jones->add_option("--depth-cap", jon_config.nucleus_caps.depth_cap,
                          "nucleus section budget");
    cmd_jones->add_option("--pair-cap", jon_config.nucleus_caps.pair_cap,
                          "nucleus product budget");
    cmd_jones->add_option("--element-limit", jon_config.element_limit,
                          "largest quotient to enumerate");
    cmd_jones->add_option("--out", jon_out, "write the JSON report here");

    // independence
    auto* cmd_ind = app.add_subcommand(
        "independence", "exact product identity for truncation/section cylinders");
    std::string ind_group, ind_vertex, ind_out, ind_cache;
    int ind_n = 1, ind_m = 1, ind_threads = 1;
    uint64_t ind_limit = kDefaultElementLimit;
    cmd_ind->add_option("--group", ind_group, "group key")->required();
    cmd_ind->add_option("--base-level", ind_n, "truncation depth n")->check(CLI::Range(1, 16));
    cmd_ind->add_option("--section-level", ind_m, "section depth m")->check(CLI::Range(1, 16));
    cmd_ind->add_option("--vertex", ind_vertex,
                        "level-n vertex as dot-separated letters, e.g. 1.2 (default 1.1...)");
    cmd_ind->add_option("--element-limit", ind_limit, "largest quotient to enumerate");
    cmd_ind->add_option("--threads", ind_threads, "enumeration threads")
        ->check(CLI::Range(1, 64));
    cmd_ind->add_option("--out", ind_out, "write the JSON report here");
    cmd_ind->add_option("--cache", ind_cache,
                        "quotient cache directory (TREEFPP_CACHE overrides)");

    // conditional
    auto* cmd_cond = app.add_subcommand(
        "conditional", "repeat probability of a fixed-vertex count across levels");
    std::string cond_group, cond_out, cond_cache, cond_mode = "exact";
    int cond_n = 1, cond_m = 1, cond_threads = 1;
    uint64_t cond_r = 1, cond_limit = kDefaultElementLimit, cond_samples = 50000;
    uint64_t cond_walk = 0, cond_seed = 0;
    cmd_cond->add_option("--group", cond_group, "group key")->required();
    cmd_cond->add_option("--base-level", cond_n, "conditioning level n")
        ->check(CLI::Range(1, 16));
    cmd_cond->add_option("--extra-levels", cond_m, "additional depth m")
        ->check(CLI::Range(1, 16));
    cmd_cond->add_option("--fixed-count", cond_r, "conditioned fixed-vertex count r");
    cmd_cond->add_option("--mode", cond_mode, "exact|mc")
        ->check(CLI::IsMember({"exact", "mc"}));
    cmd_cond->add_option("--samples", cond_samples, "walk samples (mc)");
    auto* cond_walk_opt = cmd_cond->add_option("--walk-length", cond_walk,
                                               "walk steps (default 16*(n+m))");
    auto* cond_seed_opt = cmd_cond->add_option("--seed", cond_seed, "root seed (mc)");
    cmd_cond->add_option("--element-limit", cond_limit, "largest quotient to enumerate");
    cmd_cond->add_option("--threads", cond_threads, "enumeration threads")
        ->check(CLI::Range(1, 64));
    cmd_cond->add_option("--out", cond_out, "write the JSON report here");
    cmd_cond->add_option("--cache", cond_cache,
                         "quotient cache directory (TREEFPP_CACHE overrides)");

    // sample
    auto* cmd_sample = app.add_subcommand("sample",
                                          "draw elements and tally fixed leaves");
    std::string smp_group, smp_out;
    int smp_level = 1, smp_threads = 1;
    uint64_t smp_samples = 50000, smp_walk = 0, smp_seed = 0;
    cmd_sample->add_option("--group", smp_group, "group key")->required();
    cmd_sample->add_option("--level", smp_level, "tree depth n")->check(CLI::Range(1, 32));
    cmd_sample->add_option("--samples", smp_samples, "number of draws");
    auto* smp_walk_opt = cmd_sample->add_option("--walk-length", smp_walk,
                                                "walk steps (default 16*level)");
    cmd_sample->add_option("--seed", smp_seed, "root seed")->required();
    cmd_sample->add_option("--threads", smp_threads, "unused; accepted for symmetry")
        ->check(CLI::Range(1, 64));
    cmd_sample->add_option("--out", smp_out, "write the JSON report here");

    CLI11_PARSE(app, argc, argv);

    try {
        const auto t0 = std::chrono::steady_clock::now();

        if (app.got_subcommand(cmd_zoo)) {
            for (const auto& row : list_zoo()) {
                std::printf("%-28s %-34s %s\n", row.pattern.c_str(), row.example.c_str(),
                            row.description.c_str());
            }
            return 0;
        }

        if (app.got_subcommand(cmd_fpp)) {
            if (fpp_mode == FppMode::Mc && fpp_seed_opt->count() == 0)
                throw std::invalid_argument("mc mode needs an explicit --seed");
            ZooEntry entry = build_zoo_group(fpp_group, fpp_threads);
            const auto cache = cache_directory(fpp_cache);
            preload_quotients(entry.handle, cache, fpp_max_level);

            FppConfig config;
            config.mode = fpp_mode;
            config.max_level = fpp_max_level;
            config.element_limit = fpp_limit;
            config.samples = fpp_samples;
            if (fpp_walk_opt->count()) config.walk_length = fpp_walk;
            if (fpp_seed_opt->count()) config.seed = fpp_seed;
            FppSeries series = fpp_report(entry.handle, config);
            store_quotients(entry.handle, cache);

            for (const auto& e : series.entries) print_fpp_entry(e);
            if (!series.note.empty()) std::printf("note: %s\n", series.note.c_str());

            Report report;
            report.config = {{"command", "fpp"},
                             {"group", fpp_group},
                             {"max_level", fpp_max_level},
                             {"samples", fpp_samples},
                             {"element_limit", fpp_limit},
                             {"threads", fpp_threads}};
            if (fpp_seed_opt->count()) report.config["seed"] = fpp_seed;
            if (fpp_walk_opt->count()) report.config["walk_length"] = fpp_walk;
            report.group = group_json(entry);
            report.results["fpp"] = fpp_series_json(series);
            std::string csv = render_csv(series);
            finish(report, seconds_since(t0), fpp_out, fpp_csv, &csv);
            return 0;
        }

        if (app.got_subcommand(cmd_check)) {
            ZooEntry entry = build_zoo_group(chk_group, chk_threads);
            auto source = entry.handle.source();
            const auto cache = cache_directory(chk_cache);

            Report report;
            report.config = {{"command", "check"},
                            {"group", chk_group},
                            {"property", chk_property},
                            {"element_limit", chk_limit},
                            {"threads", chk_threads}};
            report.group = group_json(entry);

            if (chk_property == "martingale") {
                const int levels = chk_max_level > 0 ? chk_max_level : 3;
                preload_quotients(entry.handle, cache, levels);
                MartingaleReport r =
                    check_martingale_condition(*source, levels, chk_limit, chk_route);
                report.config["max_level"] = levels;
                report.results["martingale"] = martingale_json(r);
                std::printf("martingale condition, levels <= %d: %s\n", levels,
                            r.pass ? "pass" : "fail");
                for (const auto& lv : r.levels) {
                    if (!lv.transitive_everywhere)
                        std::printf("  level %d fails at vertex %s\n", lv.level,
                                    vertex_str(lv.failing_vertex).c_str());
                }
                if (!r.note.empty()) std::printf("note: %s\n", r.note.c_str());
            } else if (chk_property == "transitive") {
                const int level = chk_max_level > 0 ? chk_max_level : 4;
                preload_quotients(entry.handle, cache, level);
                TransitivityReport r = is_level_transitive(*source, level, chk_limit);
                report.config["max_level"] = level;
                report.results["transitivity"] = transitivity_json(r);
                std::printf("level %d: %s", level, r.transitive ? "transitive" : "orbits");
                if (!r.transitive)
                    for (uint64_t s : r.orbit_sizes)
                        std::printf(" %llu", static_cast<unsigned long long>(s));
                std::printf("\n");
            } else {
                FractalProperty prop = FractalProperty::Fractal;
                if (chk_property == "strongly-fractal") prop = FractalProperty::StronglyFractal;
                if (chk_property == "ssf") prop = FractalProperty::SuperStronglyFractal;
                preload_quotients(entry.handle, cache, chk_stab + chk_target);
                FractalityReport r = check_fractality(*source, prop, chk_stab, chk_target,
                                                      chk_limit, chk_route);
                report.config["stab_levels"] = chk_stab;
                report.config["target_level"] = chk_target;
                report.results["fractality"] =
                    fractality_json(r, entry.handle.presentation().get());
                std::printf("%s check, K=%d, m=%d: %s\n", chk_property.c_str(),
                            r.max_stabilizer_level, r.target_level,
                            r.pass_up_to_bound ? "pass up to the bound" : "fail");
                for (const auto& c : r.checks) {
                    if (!c.surjective)
                        std::printf("  stabilizer level %d misses images at vertex %s\n",
                                    c.stabilizer_level, vertex_str(c.vertex).c_str());
                }
                if (!r.note.empty()) std::printf("note: %s\n", r.note.c_str());
            }
            store_quotients(entry.handle, cache);
            finish(report, seconds_since(t0), chk_out, "", nullptr);
            return 0;
        }

        if (app.got_subcommand(cmd_nuc)) {
            ZooEntry entry = build_zoo_group(nuc_group, 1);
            auto pres = entry.handle.presentation();
            if (!pres)
                throw std::invalid_argument(
                    "nucleus needs a wreath recursion presentation; finite-type "
                    "patterns have none");
            nuc_caps.eq_depth_cap = nuc_caps.depth_cap;
            nuc_caps.eq_pair_cap = nuc_caps.pair_cap;
            NucleusReport r = compute_nucleus(pres, nuc_caps);

            Report report;
            report.config = {{"command", "nucleus"},
                             {"group", nuc_group},
                             {"depth_cap", nuc_caps.depth_cap},
                             {"pair_cap", nuc_caps.pair_cap},
                             {"element_cap", nuc_caps.element_cap}};
            report.group = group_json(entry);
            report.results["nucleus"] = nucleus_json(r);

            if (r.status == NucleusStatus::ContractingWithNucleus) {
                std::printf("contracting; nucleus has %zu elements:\n", r.elements.size());
                for (const auto& el : r.elements)
                    std::printf("  %s\n", word_str(pres.get(), el.word).c_str());
                std::printf("n1 set (%zu):\n", r.n1.size());
                for (const auto& n1 : r.n1)
                    std::printf("  %s  cycle %s\n",
                                word_str(pres.get(), r.elements[n1.element].word).c_str(),
                                vertex_str(n1.witness_cycle).c_str());
            } else {
                std::printf("inconclusive: %s\n", r.reason.c_str());
            }
            finish(report, seconds_since(t0), nuc_out, "", nullptr);
            return r.status == NucleusStatus::ContractingWithNucleus ? 0 : 2;
        }

        if (app.got_subcommand(cmd_jones)) {
            ZooEntry entry = build_zoo_group(jon_group, 1);
            auto pres = entry.handle.presentation();
            if (!pres)
                throw std::invalid_argument(
                    "jones-check needs a wreath recursion presentation");
            jon_config.nucleus_caps.eq_depth_cap = jon_config.nucleus_caps.depth_cap;
            jon_config.nucleus_caps.eq_pair_cap = jon_config.nucleus_caps.pair_cap;
            JonesReport r = check_jones_condition(pres, jon_config);

            Report report;
            report.config = {{"command", "jones-check"},
                             {"group", jon_group},
                             {"transitivity_level", jon_config.transitivity_level},
                             {"martingale_level", jon_config.martingale_level}};
            report.group = group_json(entry);
            report.results["jones"] = jones_json(r);

            switch (r.verdict) {
                case JonesVerdict::Holds:
                    std::printf("holds: every n1 element fixes infinitely many ends\n");
                    break;
                case JonesVerdict::FailsWithWitness:
                    std::printf("fails: witness %s fixes only finitely many ends\n",
                                word_str(pres.get(), r.witness).c_str());
                    break;
                case JonesVerdict::Inconclusive:
                    std::printf("inconclusive: %s\n", r.note.c_str());
                    break;
            }
            finish(report, seconds_since(t0), jon_out, "", nullptr);
            return r.verdict == JonesVerdict::Inconclusive ? 2 : 0;
        }

        if (app.got_subcommand(cmd_ind)) {
            ZooEntry entry = build_zoo_group(ind_group, ind_threads);
            auto source = entry.handle.source();
            const auto cache = cache_directory(ind_cache);
            preload_quotients(entry.handle, cache, ind_n + ind_m);
            std::vector<uint8_t> v = ind_vertex.empty()
                                         ? std::vector<uint8_t>(size_t(ind_n), 0)
                                         : parse_vertex(ind_vertex, entry.handle.degree());
            if (int(v.size()) != ind_n)
                throw std::invalid_argument("--vertex must name a level-n vertex");

            auto Qn = source->quotient(ind_n, ind_limit);
            auto Qm = source->quotient(ind_m, ind_limit);
            const uint64_t pair_total = Qn->order() * Qm->order();
            if (pair_total > 4096)
                throw std::invalid_argument(
                    "too many singleton pairs (" + std::to_string(pair_total) +
                    "); lower the levels");

            uint64_t failures = 0;
            Json checks = Json::array();
            for (uint64_t i = 0; i < Qn->order(); ++i) {
                for (uint64_t j = 0; j < Qm->order(); ++j) {
                    CylinderCheck c = cylinder_independence_check(
                        *source, ind_n, ind_m, v, {Qn->portrait(i)}, {Qm->portrait(j)},
                        ind_limit);
                    if (!c.equal) {
                        ++failures;
                        if (checks.size() < 10) checks.push_back(cylinder_json(c));
                    }
                }
            }
            store_quotients(entry.handle, cache);

            Report report;
            report.config = {{"command", "independence"},
                             {"group", ind_group},
                             {"base_level", ind_n},
                             {"section_level", ind_m},
                             {"vertex", vertex_str(v)},
                             {"element_limit", ind_limit},
                             {"threads", ind_threads}};
            report.group = group_json(entry);
            report.results["independence"] = {{"base_level", ind_n},
                                              {"section_level", ind_m},
                                              {"vertex", vertex_str(v)},
                                              {"pairs", pair_total},
                                              {"failures", failures},
                                              {"all_equal", failures == 0},
                                              {"failed_checks", checks}};
            const std::string outcome = failures == 0
                                            ? std::string("all product identities hold")
                                            : std::to_string(failures) + " failed";
            std::printf("%llu singleton cylinder pairs at (n=%d, m=%d), vertex %s: %s\n",
                        static_cast<unsigned long long>(pair_total), ind_n, ind_m,
                        vertex_str(v).c_str(), outcome.c_str());
            finish(report, seconds_since(t0), ind_out, "", nullptr);
            return 0;
        }

        if (app.got_subcommand(cmd_cond)) {
            ZooEntry entry = build_zoo_group(cond_group, cond_threads);
            auto source = entry.handle.source();
            const auto cache = cache_directory(cond_cache);
            preload_quotients(entry.handle, cache, cond_n + cond_m);

            ConditionalResult r;
            if (cond_mode == "exact") {
                r = conditional_fixation_exact(*source, cond_n, cond_m, cond_r, cond_limit);
            } else {
                if (cond_seed_opt->count() == 0)
                    throw std::invalid_argument("mc mode needs an explicit --seed");
                const uint64_t wl = cond_walk_opt->count()
                                        ? cond_walk
                                        : uint64_t(16) * uint64_t(cond_n + cond_m);
                r = conditional_fixation_mc(*source, cond_n, cond_m, cond_r, cond_samples,
                                            wl, cond_seed, cond_limit);
            }
            store_quotients(entry.handle, cache);

            Report report;
            report.config = {{"command", "conditional"},
                             {"group", cond_group},
                             {"base_level", cond_n},
                             {"extra_levels", cond_m},
                             {"fixed_count", cond_r},
                             {"mode", cond_mode},
                             {"element_limit", cond_limit},
                             {"threads", cond_threads}};
            if (cond_mode == "mc") {
                report.config["samples"] = cond_samples;
                report.config["seed"] = cond_seed;
            }
            report.group = group_json(entry);
            report.results["conditional"] = conditional_json(r);

            std::printf("bound 1 - 1/|pi_%d| = %s\n", cond_m,
                        rational_string(r.bound).c_str());
            bool inconclusive = false;
            if (r.exact) {
                if (r.empty_condition) {
                    std::printf("no level-%d element has exactly %llu fixed vertices; "
                                "the conditional probability is vacuous\n",
                                cond_n, static_cast<unsigned long long>(cond_r));
                    inconclusive = true;
                } else {
                    std::printf("P(X_%d = %llu | X_%d = %llu) = %s = %.6f\n",
                                cond_n + cond_m,
                                static_cast<unsigned long long>(cond_r), cond_n,
                                static_cast<unsigned long long>(cond_r),
                                rational_string(*r.exact_value).c_str(), r.estimate);
                }
            } else {
                if (r.samples_in_condition == 0) {
                    std::printf("no walk sample satisfied the condition\n");
                    inconclusive = true;
                } else {
                    std::printf("estimate %.6f +/- %.6f  (wilson [%.6f, %.6f], "
                                "%llu of %llu samples in condition)\n",
                                r.estimate, r.std_error, r.wilson_lo, r.wilson_hi,
                                static_cast<unsigned long long>(r.samples_in_condition),
                                static_cast<unsigned long long>(r.samples_total));
                }
            }
            finish(report, seconds_since(t0), cond_out, "", nullptr);
            return inconclusive ? 2 : 0;
        }

        if (app.got_subcommand(cmd_sample)) {
            ZooEntry entry = build_zoo_group(smp_group, smp_threads);
            XnHistogram h;
            if (entry.handle.is_finite_type()) {
                h = xn_mc_finite_type(*entry.handle.finite_type(), smp_level, smp_samples,
                                      smp_seed);
            } else {
                const uint64_t wl = smp_walk_opt->count()
                                        ? smp_walk
                                        : uint64_t(16) * uint64_t(smp_level);
                h = xn_mc(*entry.handle.presentation(), smp_level, smp_samples, wl,
                          smp_seed);
            }
            uint64_t fixing = 0;
            for (const auto& [value, count] : h.counts)
                if (value > 0) fixing += count;

            Report report;
            report.config = {{"command", "sample"},
                             {"group", smp_group},
                             {"level", smp_level},
                             {"samples", smp_samples},
                             {"seed", smp_seed}};
            if (smp_walk_opt->count()) report.config["walk_length"] = smp_walk;
            report.group = group_json(entry);
            report.results["histogram"] = xn_json(h);
            report.results["fixed_leaf_share"] =
                double(fixing) / double(h.population ? h.population : 1);

            for (const auto& [value, count] : h.counts)
                std::printf("fixed=%llu: %llu (%.5f)\n",
                            static_cast<unsigned long long>(value),
                            static_cast<unsigned long long>(count),
                            double(count) / double(h.population));
            std::printf("fixed-leaf share %.6f over %llu draws\n",
                        double(fixing) / double(h.population),
                        static_cast<unsigned long long>(h.population));
            finish(report, seconds_since(t0), smp_out, "", nullptr);
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
