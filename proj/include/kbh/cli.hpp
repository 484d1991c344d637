#pragma once

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "errors.hpp"
#include "formulas.hpp"
#include "homology.hpp"
#include "lie_model.hpp"
#include "model_io.hpp"
#include "report.hpp"

namespace kbh::cli {

enum ExitCode : int { kSuccess = 0, kRefusal = 1, kUsage = 2, kInternal = 3 };

struct Options {
    std::string model;
    std::string pi;
    std::string format = "text";
    int pages = 0;  // 0: up to the page where the sequence is known to stop
    bool timing = false;
    std::string x, z, diamond;
    int codim = 2;
    int rank = 2;
    bool z_ddbar = false;
};

struct Loaded {
    LieModel model;
    Polyvector pi;
};

inline Loaded load(const Options& opt) {
    ParsedModel parsed = [&] {
        if (is_builtin(opt.model)) return ParsedModel{builtin_model(opt.model), std::nullopt};
        if (!std::filesystem::exists(opt.model))
            throw StructuralError("unknown model '" + opt.model + "': not a built-in and no such file");
        return parse_model(read_file(opt.model));
    }();
    int n = parsed.model.n();
    Polyvector pi(n);
    if (!opt.pi.empty())
        pi = parse_polyvector(opt.pi, n);
    else if (parsed.pi)
        pi = *parsed.pi;
    return Loaded{std::move(parsed.model), std::move(pi)};
}

inline Report model_report(const Loaded& l, bool with_pi) {
    Report r;
    r.model = l.model.name();
    r.n = l.model.n();
    if (with_pi) r.pi = format_polyvector(l.pi);
    r.scope = is_nilpotent(l.model) ? "manifold" : "invariant-model";
    return r;
}

inline ValidationSummary summarize(const ValidationReport& v) {
    ValidationSummary s;
    s.integrable = v.valid;
    for (const auto& [k, witness] : v.failures) s.failures.push_back("d(dw" + std::to_string(k) + ") = " + witness.str());
    return s;
}

// Fills the full verdict set; returns false when pi is not Poisson.
inline bool fill_checks(Report& r, const Loaded& l) {
    auto pc = check_poisson(l.model, l.pi);
    r.checks.poisson = pc.poisson;
    if (!pc.poisson) {
        r.checks.schouten_witness = pc.witness.str();
        return false;
    }
    HodgeDiamond hodge = r.hodge ? *r.hodge : dolbeault_dims(l.model);
    DimVector kb = r.kb ? *r.kb : kb_dims(l.model, l.pi);
    DimVector lp = r.lp ? *r.lp : lp_dims(l.model, l.pi);
    r.checks.unimodular = check_unimodular(l.model, l.pi);
    r.checks.e1 = check_e1_degeneracy(l.model, l.pi);
    r.checks.kb_duality = check_duality(kb);
    r.checks.lp_duality = check_duality(lp);
    bool mirrored = true;
    for (int k = 0; k <= 2 * kb.n; ++k) mirrored = mirrored && lp[2 * kb.n - k] == kb[k];
    r.checks.lp_kb_duality = mirrored;
    r.checks.euler = EulerCheck{euler_characteristic(kb), euler_characteristic(hodge)};
    return true;
}

inline int page_limit(const Options& opt, int n) {
    if (opt.pages < 0) throw StructuralError("--pages must be at least 1");
    return opt.pages == 0 ? n + 1 : opt.pages;
}

inline int execute(const std::string& command, const Options& opt, std::ostream& out) {
    auto start = std::chrono::steady_clock::now();
    Report r;
    int code = kSuccess;

    if (command == "validate") {
        Loaded l = load(opt);
        r = model_report(l, false);
        r.validation = summarize(validate(l.model));
        if (!r.validation->integrable) code = kRefusal;
    } else if (command == "hodge") {
        Loaded l = load(opt);
        r = model_report(l, false);
        r.hodge = dolbeault_dims(l.model);
    } else if (command == "kb") {
        Loaded l = load(opt);
        r = model_report(l, true);
        r.kb = kb_dims(l.model, l.pi);
    } else if (command == "lp") {
        Loaded l = load(opt);
        r = model_report(l, true);
        r.lp = lp_dims(l.model, l.pi);
    } else if (command == "ss") {
        Loaded l = load(opt);
        r = model_report(l, true);
        auto seq = spectral_sequence(l.model, l.pi, page_limit(opt, l.model.n()));
        r.pages = std::move(seq.pages);
        r.infinity = std::move(seq.infinity);
    } else if (command == "check") {
        Loaded l = load(opt);
        r = model_report(l, true);
        require_valid(l.model);
        if (!fill_checks(r, l)) code = kRefusal;
    } else if (command == "report") {
        Loaded l = load(opt);
        r = model_report(l, true);
        r.validation = summarize(validate(l.model));
        require_valid(l.model);
        r.hodge = dolbeault_dims(l.model);
        if (fill_checks(r, l)) {
            r.kb = kb_dims(l.model, l.pi);
            r.lp = lp_dims(l.model, l.pi);
            auto seq = spectral_sequence(l.model, l.pi, page_limit(opt, l.model.n()));
            r.pages = std::move(seq.pages);
            r.infinity = std::move(seq.infinity);
        } else {
            code = kRefusal;
        }
    } else if (command == "blowup") {
        BlowupSpec spec{parse_dim_vector(opt.x), parse_dim_vector(opt.z), opt.codim, opt.z_ddbar};
        r.kb = blowup_dims(spec);
        r.model = "blowup";
        r.n = r.kb->n;
    } else if (command == "pbundle") {
        r.kb = pbundle_dims(parse_dim_vector(opt.z), opt.rank);
        r.model = "pbundle";
        r.n = r.kb->n;
    } else if (command == "trivial") {
        if (opt.diamond.empty() == opt.model.empty())
            throw StructuralError("trivial: give exactly one of --diamond or --model");
        if (!opt.diamond.empty()) {
            r.hodge = parse_diamond(opt.diamond);
            r.model = "trivial";
        } else {
            Loaded l = load(opt);
            r = model_report(l, false);
            r.hodge = dolbeault_dims(l.model);
        }
        r.kb = trivial_poisson_dims(*r.hodge);
        r.n = r.hodge->n;
    } else {
        throw StructuralError("unknown subcommand '" + command + "'");
    }

    if (opt.timing)
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out << (opt.format == "json" ? render_json(r) : render_text(r));
    return code;
}

/// Runs one command line (without the program name). Exit codes: 0
/// success, 1 domain refusal, 2 parse or usage error, 3 internal error.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Koszul-Brylinski and Lichnerowicz-Poisson homology of invariant holomorphic Poisson models"};
    app.name("kbh");
    app.require_subcommand(1, 1);

    Options opt;
    std::string model_help = "model file or built-in name (" + [] {
        std::string s;
        for (const auto& name : builtin_names()) s += (s.empty() ? "" : ", ") + name;
        return s;
    }() + ")";

    auto common = [&](CLI::App* sub) {
        sub->add_option("--format", opt.format, "output format")->check(CLI::IsMember({"text", "json"}));
        sub->add_flag("--timing", opt.timing, "append elapsed time to the report");
    };
    auto with_model = [&](CLI::App* sub, bool with_pi) {
        sub->add_option("--model", opt.model, model_help)->required();
        if (with_pi) sub->add_option("--pi", opt.pi, "Poisson bivector, e.g. \"X1^X2 + X2^X3\" (default: from the model file, else 0)");
        common(sub);
    };

    with_model(app.add_subcommand("validate", "integrability verdict for a model"), false);
    with_model(app.add_subcommand("hodge", "Hodge diamond of the invariant Dolbeault cohomology"), false);
    with_model(app.add_subcommand("kb", "Koszul-Brylinski homology dimensions"), true);
    with_model(app.add_subcommand("lp", "Lichnerowicz-Poisson cohomology dimensions"), true);
    auto* ss = app.add_subcommand("ss", "pages of the Dolbeault-Koszul-Brylinski spectral sequence");
    with_model(ss, true);
    ss->add_option("--pages", opt.pages, "last page to list (default n+1)")->check(CLI::PositiveNumber);
    with_model(app.add_subcommand("check", "Poisson, unimodularity, degeneracy, duality and Euler verdicts"), true);
    auto* rep = app.add_subcommand("report", "full bundle for a model and bivector");
    with_model(rep, true);
    rep->add_option("--pages", opt.pages, "last page to list (default n+1)")->check(CLI::PositiveNumber);

    auto* blowup = app.add_subcommand("blowup", "blow-up formula along a centre satisfying the ddbar-lemma");
    blowup->add_option("--x", opt.x, "ambient dimension vector (inline list, JSON, or @file)")->required();
    blowup->add_option("--z", opt.z, "centre dimension vector (inline list, JSON, or @file)")->required();
    blowup->add_option("--codim", opt.codim, "codimension c >= 2 of the centre")->required();
    blowup->add_flag("--z-ddbar", opt.z_ddbar, "assert that the centre satisfies the ddbar-lemma");
    common(blowup);

    auto* pbundle = app.add_subcommand("pbundle", "projectivisation of a rank-c bundle");
    pbundle->add_option("--z", opt.z, "base dimension vector (inline list, JSON, or @file)")->required();
    pbundle->add_option("--rank", opt.rank, "rank c >= 2 of the bundle")->required();
    common(pbundle);

    auto* trivial = app.add_subcommand("trivial", "homology of the zero Poisson structure from a Hodge diamond");
    trivial->add_option("--diamond", opt.diamond, "rows h^{p,0..n} separated by ';' (inline, JSON, or @file)");
    trivial->add_option("--model", opt.model, model_help);
    common(trivial);

    std::vector<std::string> argv_store{"kbh"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsage;
    }

    std::string command = app.get_subcommands().front()->get_name();
    try {
        return execute(command, opt, out);
    } catch (const DomainRefusal& e) {
        err << "refused: " << e.what() << "\n";
        return kRefusal;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kUsage;
    } catch (const InternalError& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternal;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternal;
    }
}

inline int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace kbh::cli
