// z2rank: command-line front end for Z2 rank, minimum-rank diagonal
// completion, hieroglyph realizability, [m choose l]-matrices, and symmetric
// form classification.
//
// Exit codes: 0 success / decision true, 1 decision false, 2 usage error,
// 3 input format error, 4 search budget exceeded.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include <z2rank/z2rank.hpp>

using nlohmann::json;
using namespace z2rank;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_false = 1;
constexpr int exit_usage = 2;
constexpr int exit_input = 3;
constexpr int exit_budget = 4;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw format_error("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json bits_json(const BitVector& v) {
    json a = json::array();
    for (std::size_t i = 0; i < v.size(); ++i) a.push_back(v.get(i) ? 1 : 0);
    return a;
}

json matrix_json(const BitMatrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.n_rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.n_cols(); ++c) row.push_back(m.get(r, c) ? 1 : 0);
        rows.push_back(std::move(row));
    }
    return rows;
}

json certificate_json(const Rank1Certificate& c) {
    return {{"kind", c.kind == Rank1Certificate::Kind::pattern3 ? "pattern3" : "pattern4"},
            {"vertices", c.vertices}};
}

std::string subset_text(const std::vector<std::size_t>& s) {
    std::string out = "[";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s[i]);
    }
    return out + "]";
}

void emit(bool as_json, const json& j, const std::string& text) {
    if (as_json)
        std::cout << j.dump() << '\n';
    else
        std::cout << text;
}

struct Settings {
    bool as_json = false;
    std::uint64_t seed = 0;
    std::uint64_t budget = 1'000'000'000;
    unsigned threads = 1;

    SearchOptions search() const { return {threads, budget}; }
};

int run_rank(const Settings& s, const std::string& file) {
    const BitMatrix m = parse_matrix(read_file(file));
    const std::size_t r = rank(m);
    emit(s.as_json, {{"rank", r}}, std::to_string(r) + "\n");
    return exit_ok;
}

int run_det(const Settings& s, const std::string& file) {
    const BitMatrix m = parse_matrix(read_file(file));
    const int d = det(m);
    emit(s.as_json, {{"det", d}}, std::to_string(d) + "\n");
    return exit_ok;
}

int run_count(const Settings& s, std::uint64_t m, std::uint64_t n, std::uint64_t k) {
    const bigint c = count_matrices_of_rank(m, n, k);
    std::ostringstream ss;
    ss << c;
    emit(s.as_json, {{"count", ss.str()}}, ss.str() + "\n");
    return exit_ok;
}

struct CompleteMode {
    bool min_rank_mode = false;
    bool approx = false;
    bool nondegenerate = false;
    bool degenerate = false;
    bool rank1 = false;
    std::int64_t exact_k = -1;
};

int run_complete(const Settings& s, const std::string& file, const CompleteMode& mode) {
    const BitMatrix m = parse_matrix(read_file(file));
    if (mode.min_rank_mode) {
        const CompletionResult r = min_rank(m, s.search());
        emit(s.as_json, {{"R", r.achieved_rank}, {"witness", bits_json(r.witness.values)}},
             "R = " + std::to_string(r.achieved_rank) +
                 "\nwitness = " + r.witness.values.to_string() + "\n");
        return exit_ok;
    }
    if (mode.exact_k >= 0) {
        const auto r = min_rank_exact(m, static_cast<std::size_t>(mode.exact_k), s.threads);
        if (!r) {
            emit(s.as_json, {{"achievable", false}},
                 "not achievable with rank <= " + std::to_string(mode.exact_k) + "\n");
            return exit_false;
        }
        emit(s.as_json, {{"R", r->achieved_rank}, {"witness", bits_json(r->witness.values)}},
             "R = " + std::to_string(r->achieved_rank) +
                 "\nwitness = " + r->witness.values.to_string() + "\n");
        return exit_ok;
    }
    if (mode.approx) {
        const std::size_t k = min_rank_approx(m);
        emit(s.as_json, {{"k", k}},
             "k = " + std::to_string(k) + "  (k/2 <= R <= k)\n");
        return exit_ok;
    }
    if (mode.nondegenerate) {
        const DiagonalAssignment d = complete_nondegenerate(m);
        emit(s.as_json, {{"witness", bits_json(d.values)}},
             "witness = " + d.values.to_string() + "\n");
        return exit_ok;
    }
    if (mode.degenerate) {
        const DiagonalAssignment d = complete_degenerate(m);
        emit(s.as_json, {{"witness", bits_json(d.values)}},
             "witness = " + d.values.to_string() + "\n");
        return exit_ok;
    }
    // --rank1
    const auto r = complete_to_rank_le1(m);
    if (const auto* ok = std::get_if<CompletionResult>(&r)) {
        emit(s.as_json, {{"R", ok->achieved_rank}, {"witness", bits_json(ok->witness.values)}},
             "R = " + std::to_string(ok->achieved_rank) +
                 "\nwitness = " + ok->witness.values.to_string() + "\n");
        return exit_ok;
    }
    const auto& cert = std::get<Rank1Certificate>(r);
    std::string text = std::string("no completion of rank <= 1; ") +
                       (cert.kind == Rank1Certificate::Kind::pattern3 ? "pattern3"
                                                                      : "pattern4") +
                       " at vertices " + subset_text(cert.vertices) + "\n";
    emit(s.as_json, {{"certificate", certificate_json(cert)}}, text);
    return exit_false;
}

struct HieroMode {
    bool genus = false;
    bool mobius = false;
    std::int64_t check_k = -1;
    bool tokens = false;
};

int hiero_one(const Settings& s, const Hieroglyph& h, const HieroMode& mode,
              const std::string& word_label, bool labelled) {
    json j;
    std::string text;
    int code = exit_ok;
    if (mode.genus) {
        const std::size_t g = min_genus(h, s.search());
        j = {{"genus", g}};
        text = "genus = " + std::to_string(g) + "\n";
    } else if (mode.mobius) {
        const MobiusResult r = mobius_realizable(h);
        if (r.realizable) {
            j = {{"mobius", true}, {"witness", bits_json(r.witness->values)}};
            text = "mobius = true\nwitness = " + r.witness->values.to_string() + "\n";
        } else {
            j = {{"mobius", false}, {"certificate", certificate_json(*r.certificate)}};
            text = "mobius = false; certificate at letters ";
            std::string letters;
            for (std::size_t v : r.certificate->vertices) {
                if (!letters.empty()) letters += ",";
                letters += h.letters[v];
            }
            text += letters + "\n";
            code = exit_false;
        }
    } else if (mode.check_k >= 0) {
        const RealizabilityResult r =
            realizable_on(h, static_cast<std::size_t>(mode.check_k), s.threads);
        if (r.realizable) {
            j = {{"realizable", true}, {"witness", bits_json(r.witness->values)}};
            text = "realizable = true\nwitness = " + r.witness->values.to_string() + "\n";
        } else {
            j = {{"realizable", false}};
            text = "realizable = false\n";
            code = exit_false;
        }
    } else {
        const std::size_t g = min_genus(h, s.search());
        const auto exact = min_rank_exact(overlap_matrix(h), g, s.threads);
        const MobiusResult mb = mobius_realizable(h);
        j = {{"n", h.size()},
             {"genus", g},
             {"mobius", mb.realizable},
             {"witness", bits_json(exact->witness.values)}};
        text = "n = " + std::to_string(h.size()) + "\ngenus = " + std::to_string(g) +
               "\nmobius = " + (mb.realizable ? "true" : "false") +
               "\nwitness = " + exact->witness.values.to_string() + "\n";
    }
    if (labelled) {
        j["word"] = word_label;
        text = word_label + ": " + text;
    }
    emit(s.as_json, j, text);
    return code;
}

int run_hiero(const Settings& s, const std::string& arg, const HieroMode& mode) {
    auto parse = [&](const std::string& w) {
        return mode.tokens ? parse_hieroglyph_tokens(w) : parse_hieroglyph(w);
    };
    if (std::filesystem::exists(arg)) {
        const std::string content = read_file(arg);
        std::istringstream lines(content);
        std::string line;
        int worst = exit_ok;
        while (std::getline(lines, line)) {
            std::string stripped = line;
            while (!stripped.empty() && (stripped.back() == '\r' || stripped.back() == ' '))
                stripped.pop_back();
            if (stripped.empty() || stripped.front() == '#') continue;
            worst = std::max(worst, hiero_one(s, parse(stripped), mode, stripped, true));
        }
        return worst;
    }
    return hiero_one(s, parse(arg), mode, arg, false);
}

std::string choose_header(std::size_t m, std::size_t l) {
    return "# m=" + std::to_string(m) + " l=" + std::to_string(l) + "\n";
}

int run_choose_solve(const Settings& s, std::size_t m, std::size_t l, bool even) {
    const auto space = solve_choose_space(m, l, even);
    if (!space) {
        emit(s.as_json, {{"feasible", false}}, "infeasible\n");
        return exit_false;
    }
    SubsetIndexer ix(m, l);
    const BitMatrix member = unpack_member(ix, space->particular);
    emit(s.as_json,
         {{"feasible", true},
          {"kernel_dim", space->dimension()},
          {"member", matrix_json(member)}},
         "feasible\nkernel dimension = " + std::to_string(space->dimension()) + "\n" +
             choose_header(m, l) + format_matrix(member));
    return exit_ok;
}

int run_choose_min_rank(const Settings& s, std::size_t m, std::size_t l, bool even) {
    const auto space = solve_choose_space(m, l, even);
    if (!space) {
        emit(s.as_json, {{"feasible", false}}, "infeasible\n");
        return exit_false;
    }
    SubsetIndexer ix(m, l);
    SpaceMinRankOptions opts;
    opts.seed = s.seed;
    const SpaceMinRank r = min_rank_over_space(*space, ix, even, opts);
    emit(s.as_json,
         {{"feasible", true},
          {"lower", r.lower},
          {"upper", r.upper},
          {"exact", r.exact},
          {"witness", matrix_json(r.witness)}},
         "lower = " + std::to_string(r.lower) + "\nupper = " + std::to_string(r.upper) +
             "\nexact = " + (r.exact ? "true" : "false") + "\n" + choose_header(m, l) +
             format_matrix(r.witness));
    return exit_ok;
}

int run_choose_validate(const Settings& s, const std::string& file, std::size_t m,
                        std::size_t l, bool even) {
    const BitMatrix mat = parse_matrix(read_file(file));
    const ChooseMatrix a{SubsetIndexer(m, l), mat};
    const auto report = validate(a, even);
    if (report.empty()) {
        emit(s.as_json, {{"valid", true}}, "valid\n");
        return exit_ok;
    }
    json violations = json::array();
    std::string text;
    for (const auto& v : report) {
        switch (v.kind) {
        case Violation::Kind::triviality:
            violations.push_back({{"kind", "triviality"}, {"P", v.a}, {"Q", v.b}});
            text += "triviality violated: P=" + subset_text(v.a) + " Q=" + subset_text(v.b) + "\n";
            break;
        case Violation::Kind::linear_dependence:
            violations.push_back({{"kind", "linear-dependence"}, {"F", v.a}, {"P", v.b}});
            text += "linear dependence violated: F=" + subset_text(v.a) +
                    " P=" + subset_text(v.b) + "\n";
            break;
        case Violation::Kind::nontriviality:
            violations.push_back({{"kind", "non-triviality"}, {"F", v.a}, {"i", v.b[0]}});
            text += "non-triviality violated: F=" + subset_text(v.a) +
                    " i=" + std::to_string(v.b[0]) + "\n";
            break;
        case Violation::Kind::evenness:
            violations.push_back({{"kind", "evenness"}, {"P", v.a}});
            text += "evenness violated: P=" + subset_text(v.a) + "\n";
            break;
        }
    }
    text += "invalid: " + std::to_string(report.size()) + " violations\n";
    emit(s.as_json, {{"valid", false}, {"violations", violations}}, text);
    return exit_false;
}

int run_form_classify(const Settings& s, const std::string& file) {
    const BitMatrix m = parse_matrix(read_file(file));
    const FormDecomposition d = classify_form(m);
    json basis = json::array();
    std::string text = "k = " + std::to_string(d.hyperbolic_pairs) +
                       "\nl = " + std::to_string(d.odd_count) + "\nbasis:\n";
    for (const BitVector& v : d.basis) {
        basis.push_back(bits_json(v));
        text += v.to_string() + "\n";
    }
    emit(s.as_json,
         {{"k", d.hyperbolic_pairs}, {"l", d.odd_count}, {"basis", basis}}, text);
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"linear algebra over Z2: rank, minimum-rank diagonal completion, "
                 "hieroglyph realizability, [m choose l]-matrices, symmetric forms"};
    app.require_subcommand(1);
    app.fallthrough();

    Settings settings;
    app.add_flag("--json", settings.as_json, "emit JSON instead of text");
    app.add_option("--seed", settings.seed, "seed for randomized sampling");
    app.add_option("--budget", settings.budget, "operation cap for minimum-rank searches");
    app.add_option("--threads", settings.threads, "worker threads for completion searches")
        ->check(CLI::Range(1u, 256u));

    std::string file, hiero_arg;
    std::uint64_t cm = 0, cn = 0, ck = 0;
    std::size_t chm = 0, chl = 0;
    bool even = false;
    CompleteMode cmode;
    HieroMode hmode;

    auto* rank_cmd = app.add_subcommand("rank", "rank of a matrix file")->fallthrough();
    rank_cmd->add_option("file", file)->required();

    auto* det_cmd = app.add_subcommand("det", "determinant of a square matrix file")->fallthrough();
    det_cmd->add_option("file", file)->required();

    auto* count_cmd = app.add_subcommand("count", "number of m x n matrices of rank k")->fallthrough();
    count_cmd->add_option("m", cm)->required();
    count_cmd->add_option("n", cn)->required();
    count_cmd->add_option("k", ck)->required();

    auto* complete_cmd = app.add_subcommand("complete", "diagonal completion searches")->fallthrough();
    complete_cmd->add_option("file", file)->required();
    auto* cgrp = complete_cmd->add_option_group("mode");
    cgrp->add_flag("--min-rank", cmode.min_rank_mode, "exact minimum completion rank");
    cgrp->add_option("--exact", cmode.exact_k, "decide completion rank <= k")
        ->check(CLI::NonNegativeNumber);
    cgrp->add_flag("--approx", cmode.approx, "2-approximation of the minimum rank");
    cgrp->add_flag("--nondegenerate", cmode.nondegenerate, "completion with det = 1");
    cgrp->add_flag("--degenerate", cmode.degenerate, "completion with det = 0");
    cgrp->add_flag("--rank1", cmode.rank1, "rank <= 1 completion or certificate");
    cgrp->require_option(1);

    auto* hiero_cmd = app.add_subcommand("hiero", "hieroglyph realizability")->fallthrough();
    hiero_cmd->add_option("word", hiero_arg, "double-occurrence word, or a file of them")
        ->required();
    auto* hgrp = hiero_cmd->add_option_group("mode");
    hgrp->add_flag("--genus", hmode.genus, "least k with a disk-with-k-Moebius-bands realization");
    hgrp->add_flag("--mobius", hmode.mobius, "Moebius band realizability");
    hgrp->add_option("--check", hmode.check_k, "realizability with k Moebius bands")
        ->check(CLI::NonNegativeNumber);
    hgrp->require_option(0, 1);
    hiero_cmd->add_flag("--tokens", hmode.tokens, "whitespace-separated multi-character letters");

    auto* choose_cmd = app.add_subcommand("choose", "[m choose l]-matrix tools")->fallthrough();
    choose_cmd->require_subcommand(1);
    auto* csolve = choose_cmd->add_subcommand("solve", "solve the constraint system")->fallthrough();
    csolve->add_option("m", chm)->required();
    csolve->add_option("l", chl)->required();
    csolve->add_flag("--even", even, "require a zero diagonal");
    auto* cmin = choose_cmd->add_subcommand("min-rank", "minimum rank over the solution space")->fallthrough();
    cmin->add_option("m", chm)->required();
    cmin->add_option("l", chl)->required();
    cmin->add_flag("--even", even, "require a zero diagonal");
    auto* cval = choose_cmd->add_subcommand("validate", "check a matrix against the axioms")->fallthrough();
    cval->add_option("file", file)->required();
    cval->add_option("m", chm)->required();
    cval->add_option("l", chl)->required();
    cval->add_flag("--even", even, "also require a zero diagonal");

    auto* form_cmd = app.add_subcommand("form", "symmetric bilinear forms")->fallthrough();
    form_cmd->require_subcommand(1);
    auto* fclassify = form_cmd->add_subcommand("classify", "canonical decomposition")->fallthrough();
    fclassify->add_option("file", file)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n';
        return exit_usage;
    }

    try {
        if (*rank_cmd) return run_rank(settings, file);
        if (*det_cmd) return run_det(settings, file);
        if (*count_cmd) return run_count(settings, cm, cn, ck);
        if (*complete_cmd) return run_complete(settings, file, cmode);
        if (*hiero_cmd) return run_hiero(settings, hiero_arg, hmode);
        if (*csolve) return run_choose_solve(settings, chm, chl, even);
        if (*cmin) return run_choose_min_rank(settings, chm, chl, even);
        if (*cval) return run_choose_validate(settings, file, chm, chl, even);
        if (*fclassify) return run_form_classify(settings, file);
        std::cerr << "no subcommand selected\n";
        return exit_usage;
    } catch (const budget_error& e) {
        std::cerr << "budget exceeded: settled bounds " << e.lower_bound
                  << " <= R <= " << e.upper_bound << '\n';
        return exit_budget;
    } catch (const format_error& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return exit_input;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return exit_input;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
}
