#include "folds/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "folds/error.hpp"
#include "folds/eval.hpp"
#include "folds/homspan.hpp"
#include "folds/isogen.hpp"
#include "folds/stdlib.hpp"
#include "folds/text.hpp"

namespace folds::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// An error tied to the input it came from.
struct InputError {
    std::string source;
    Error error;
};

std::optional<std::string> read_file(const std::string& path) {
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) return std::nullopt;
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <typename F>
auto guarded(const std::string& source, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        throw InputError{source, e};
    }
}

std::string stem_of(const std::string& arg) { return fs::path(arg).stem().string(); }

// A path, or the name of a builtin signature with or without ".folds".
std::unique_ptr<Signature> load_signature(const std::string& arg) {
    if (auto text = read_file(arg))
        return guarded(arg, [&] { return std::make_unique<Signature>(parse_signature(*text)); });
    const std::string stem = stem_of(arg);
    for (const auto& n : builtin_signature_names())
        if (n == stem) return std::make_unique<Signature>(builtin_signature(n));
    throw InputError{arg, Error(ErrorKind::Name, "no signature file or builtin named '" + arg + "'")};
}

// A path, or the name of a corpus structure with or without ".str".
FinStructure load_structure(const Signature& sig, const std::string& arg) {
    std::string text;
    if (auto t = read_file(arg)) {
        text = std::move(*t);
    } else {
        const std::string stem = stem_of(arg);
        const CorpusEntry* hit = nullptr;
        for (const auto& e : corpus())
            if (e.name == stem) hit = &e;
        if (!hit) throw InputError{arg, Error(ErrorKind::Name, "no structure file or corpus entry named '" + arg + "'")};
        text = print_structure(hit->structure);
    }
    return guarded(arg, [&] { return parse_structure(sig, text); });
}

// A path, or "tcat".
Theory load_theory(const Signature& sig, const std::string& arg) {
    std::string text;
    if (auto t = read_file(arg))
        text = std::move(*t);
    else if (stem_of(arg) == "tcat")
        text = std::string(tcat_text());
    else
        throw InputError{arg, Error(ErrorKind::Name, "no theory file named '" + arg + "'")};
    return guarded(arg, [&] { return parse_theory(sig, text); });
}

// ---------------------------------------------------------------- JSON views

json formula_json(const Signature& sig, const Formula& f) {
    auto decl = [&](const VarDecl& d) { return json{{"name", d.name}, {"sort", sig.sort_name(d.sort)}, {"args", d.args}}; };
    switch (f->kind) {
        case FormulaKind::Top: return json{{"kind", "true"}};
        case FormulaKind::Bottom: return json{{"kind", "false"}};
        case FormulaKind::Atom: return json{{"kind", "atom"}, {"sort", sig.sort_name(f->sort)}, {"args", f->args}};
        case FormulaKind::Equiv:
            return json{{"kind", "equiv"}, {"sort", sig.sort_name(f->sort)}, {"lhs", f->args}, {"rhs", f->rhs_args}};
        case FormulaKind::Ind: return json{{"kind", "ind"}, {"args", f->args}};
        case FormulaKind::And: {
            json parts = json::array();
            for (const auto& c : f->children) parts.push_back(formula_json(sig, c));
            return json{{"kind", "and"}, {"parts", parts}};
        }
        case FormulaKind::Or:
        case FormulaKind::Implies:
        case FormulaKind::Iff: {
            const char* k = f->kind == FormulaKind::Or ? "or" : f->kind == FormulaKind::Implies ? "implies" : "iff";
            return json{{"kind", k}, {"lhs", formula_json(sig, f->children[0])}, {"rhs", formula_json(sig, f->children[1])}};
        }
        case FormulaKind::Forall:
        case FormulaKind::Exists:
        case FormulaKind::Sigma: {
            const char* k = f->kind == FormulaKind::Forall ? "forall" : f->kind == FormulaKind::Exists ? "exists" : "sigma";
            return json{{"kind", k}, {"binder", decl(f->binder)}, {"body", formula_json(sig, f->children[0])}};
        }
    }
    return json{};
}

json boundary_json(const FinStructure& m, SortId s, const Boundary& b) {
    const auto& sig = m.signature();
    json out = json::array();
    for (std::size_t j = 0; j < b.size(); ++j) out.push_back(m.display(sig.cod(sig.direct_arrows(s)[j]), b[j]));
    return out;
}

json structure_json(const FinStructure& m) {
    const auto& sig = m.signature();
    json carriers = json::object();
    for (auto s : sig.sorts()) {
        json elems = json::array();
        for (std::uint32_t i = 0; i < m.size(s); ++i)
            elems.push_back({{"name", m.display(s, i)}, {"args", boundary_json(m, s, m.element(s, i).args)}});
        carriers[sig.sort_name(s)] = elems;
    }
    return json{{"name", m.name()}, {"signature", sig.name()}, {"carriers", carriers}, {"text", print_structure(m)}};
}

json hom_json(const FinStructure& m, const FinStructure& n, const Hom& h) {
    const auto& sig = m.signature();
    json out = json::object();
    for (auto s : sig.sorts()) {
        json map = json::array();
        for (std::uint32_t i = 0; i < m.size(s); ++i) map.push_back({m.display(s, i), n.display(s, h(s, i))});
        out[sig.sort_name(s)] = map;
    }
    return out;
}

json sections_json(const FinStructure& m, const FinStructure& n, const FibSurjReport& r) {
    const auto& sig = m.signature();
    json out = json::array();
    for (const auto& sec : r.sections) {
        json pre = json::array();
        for (auto [t, src] : sec.preimage) pre.push_back({n.display(sec.sort, t), m.display(sec.sort, src)});
        out.push_back({{"sort", sig.sort_name(sec.sort)},
                       {"boundary", boundary_json(m, sec.sort, sec.boundary)},
                       {"preimage", pre}});
    }
    return out;
}

std::string hom_text(const FinStructure& m, const FinStructure& n, const Hom& h) {
    const auto& sig = m.signature();
    std::string out;
    for (auto s : sig.sorts()) {
        out += "  " + sig.sort_name(s) + ":";
        for (std::uint32_t i = 0; i < m.size(s); ++i) out += " " + m.display(s, i) + "->" + n.display(s, h(s, i));
        out += "\n";
    }
    return out;
}

json violation_json(const FinStructure& m, const SaturationViolation& v) {
    return json{{"sort", m.signature().sort_name(v.sort)},
                {"boundary", boundary_json(m, v.sort, v.boundary)},
                {"pair", {m.display(v.sort, v.a), m.display(v.sort, v.b)}},
                {"card", v.card.to_string()}};
}

// ---------------------------------------------------------------- commands

struct Outcome {
    int code = kHolds;
    std::string text;
    json witness;  // null when there is none
    json report = json::object();
};

Outcome cmd_check_sig(const std::string& file) {
    auto sig = load_signature(file);
    Outcome o;
    o.text = "ok: signature " + sig->name() + " with " + std::to_string(sig->sort_count()) + " sorts, height " +
             std::to_string(sig->height()) + "\n";
    o.report = {{"name", sig->name()}, {"sorts", sig->sort_count()}, {"height", sig->height()}};
    return o;
}

Outcome cmd_levels(const std::string& file) {
    auto sig = load_signature(file);
    Outcome o;
    json levels = json::object();
    std::string line;
    for (auto s : sig->sorts_by_level()) {
        if (!line.empty()) line += ' ';
        line += sig->sort_name(s) + ":" + std::to_string(sig->level(s));
        levels[sig->sort_name(s)] = sig->level(s);
    }
    o.text = line + "\n";
    o.report = {{"levels", levels}, {"height", sig->height()}};
    return o;
}

// Whether the last variable of the context is compatible with the sort,
// together with every sort it is compatible with.
Outcome cmd_compat(const std::string& file, const std::string& sort, const std::string& ctx_text) {
    auto sig = load_signature(file);
    SortId r = guarded(sort, [&] { return sig->sort(sort); });
    Context ctx = guarded(ctx_text, [&] { return parse_context(*sig, ctx_text); });
    if (ctx.decls().empty()) throw InputError{ctx_text, Error(ErrorKind::IllFormedContext, "empty context")};
    const std::string x = ctx.decls().back().name;
    json all = json::array();
    std::string names;
    for (auto s : compatible_sorts(ctx, x)) {
        all.push_back(sig->sort_name(s));
        names += (names.empty() ? "" : ", ") + sig->sort_name(s);
    }
    bool ok = is_compatible(ctx, x, r);
    Outcome o;
    o.code = ok ? kHolds : kFails;
    o.text = x + (ok ? " is " : " is not ") + sort + "-compatible\ncompatible sorts: {" + names + "}\n";
    o.report = {{"variable", x}, {"sort", sort}, {"compatible", ok}, {"compatible_sorts", all}};
    return o;
}

Outcome cmd_gen_iso(const std::string& file, const std::string& sort, bool verbose) {
    auto sig = load_signature(file);
    SortId k = guarded(sort, [&] { return sig->sort(sort); });
    IsoFormula iso = iso_formula(*sig, k);
    auto parts = conjuncts(iso.formula);
    Outcome o;
    o.text = "context: " + print_context(iso.context) + "\n";
    o.text += "Ind(" + iso.x + "," + iso.y + ") with " + std::to_string(parts.size()) + " conjuncts:\n";
    json jparts = json::array();
    for (const auto& c : parts) {
        o.text += "  " + print_formula(*sig, c) + "\n";
        jparts.push_back(print_formula(*sig, c));
    }
    o.report = {{"sort", sort},
                {"context", print_context(iso.context)},
                {"x", iso.x},
                {"y", iso.y},
                {"formula", print_formula(*sig, iso.formula)},
                {"conjuncts", jparts}};
    if (verbose) {
        json trace = json::array();
        o.text += "trace:\n";
        for (const auto& e : ind_trace(iso.context, iso.x, iso.y)) {
            std::string where = sig->sort_name(e.sort) + " at " + sig->arrow_label(e.arrow);
            o.text += "  " + where + ": " + (e.conjuncts.empty() ? "vacuous" : std::to_string(e.conjuncts.size())) + "\n";
            json cs = json::array();
            for (const auto& c : e.conjuncts) {
                o.text += "    " + print_formula(*sig, c) + "\n";
                cs.push_back(print_formula(*sig, c));
            }
            trace.push_back({{"sort", sig->sort_name(e.sort)}, {"arrow", sig->arrow_label(e.arrow)}, {"conjuncts", cs}});
        }
        o.report["trace"] = trace;
        o.report["ast"] = formula_json(*sig, iso.formula);
    }
    return o;
}

Outcome cmd_eval(const std::string& sig_file, const std::string& model_file, const std::string& text, bool card) {
    auto sig = load_signature(sig_file);
    FinStructure m = load_structure(*sig, model_file);
    Formula f = guarded("formula", [&] { return parse_formula(*sig, text); });
    Context empty(*sig);
    Card c = guarded("formula", [&] {
        if (!f->free_vars.empty())
            throw Error(ErrorKind::OpenFormula, "formula has free variable '" + f->free_vars.front() + "'");
        return eval_card(m, empty, f, {});
    });
    Outcome o;
    o.code = c.truthy() ? kHolds : kFails;
    o.text = c.truthy() ? "true" : "false";
    if (card) o.text += " (card " + c.to_string() + ")";
    o.text += "\n";
    o.report = {{"value", c.truthy()}, {"card", c.to_string()}};
    return o;
}

Outcome cmd_check_model(const std::string& sig_file, const std::string& thy_file, const std::string& model_file) {
    auto sig = load_signature(sig_file);
    Theory t = load_theory(*sig, thy_file);
    FinStructure m = load_structure(*sig, model_file);
    ModelReport r = check_model(m, t);
    Outcome o;
    o.code = r.ok ? kHolds : kFails;
    if (r.ok) {
        o.text = "ok: " + m.name() + " satisfies all " + std::to_string(t.axioms.size()) + " axioms of " + t.name + "\n";
    } else {
        o.text = "not a model: " + m.name() + " fails";
        for (const auto& a : r.failed) o.text += " " + a;
        o.text += "\n";
        o.witness = {{"failed", r.failed}};
    }
    o.report = {{"theory", t.name}, {"axioms", t.axioms.size()}, {"failed", r.failed}};
    return o;
}

Outcome cmd_sat(const std::string& sig_file, const std::string& model_file, std::optional<int> level, bool total) {
    auto sig = load_signature(sig_file);
    FinStructure m = load_structure(*sig, model_file);
    SaturationProfile p = saturation_profile(m);
    Outcome o;
    json sorts = json::array();
    json violations = json::array();
    for (auto s : sig->sorts_by_level()) {
        const auto& r = p.sorts[s.value];
        o.text += sig->sort_name(s) + " (level " + std::to_string(sig->level(s)) + "): " +
                  (r.saturated ? "saturated" : "not saturated") + "\n";
        for (const auto& v : r.violations) {
            o.text += "  over " + m.display_boundary(s, v.boundary) + ": card(" + m.display(s, v.a) + " ~= " +
                      m.display(s, v.b) + ") = " + v.card.to_string() + "\n";
            violations.push_back(violation_json(m, v));
        }
        sorts.push_back({{"sort", sig->sort_name(s)}, {"level", sig->level(s)}, {"saturated", r.saturated}});
    }
    json levels = json::array();
    for (std::size_t n = 0; n < p.levels.size(); ++n) {
        levels.push_back(static_cast<bool>(p.levels[n]));
        o.text += std::to_string(n + 1) + "-saturated: " + (p.levels[n] ? "yes" : "no") + "\n";
    }
    o.text += std::string("totally saturated: ") + (p.total ? "yes" : "no") + "\n";
    o.report = {{"sorts", sorts}, {"levels", levels}, {"total", p.total}, {"violations", violations}};
    if (level) {
        if (*level < 1) throw InputError{"--level", Error(ErrorKind::PreconditionViolation, "level must be at least 1")};
        bool ok = *level > sig->height() ? p.total : static_cast<bool>(p.levels[*level - 1]);
        o.code = ok ? kHolds : kFails;
    } else if (total) {
        o.code = p.total ? kHolds : kFails;
    }
    if (o.code == kFails) o.witness = {{"violations", violations}};
    return o;
}

Outcome cmd_hom(const std::string& sig_file, const std::string& m_file, const std::string& n_file, bool fibsurj) {
    auto sig = load_signature(sig_file);
    FinStructure m = load_structure(*sig, m_file);
    FinStructure n = load_structure(*sig, n_file);
    Outcome o;
    const std::string what = fibsurj ? "fiberwise surjective homomorphism" : "homomorphism";
    auto h = find_hom(m, n, fibsurj);
    if (!h) {
        o.code = kFails;
        o.text = "no " + what + " " + m.name() + " -> " + n.name() + "\n";
        o.witness = {{"reason", "no " + what}};
        o.report = {{"found", false}};
        return o;
    }
    o.text = what + " " + m.name() + " -> " + n.name() + ":\n" + hom_text(m, n, *h);
    o.witness = {{"map", hom_json(m, n, *h)}};
    if (fibsurj) o.witness["sections"] = sections_json(m, n, is_fibsurj(m, n, *h));
    o.report = {{"found", true}};
    return o;
}

Outcome cmd_equiv(const std::string& sig_file, const std::string& m_file, const std::string& n_file,
                  std::optional<std::size_t> max_apex) {
    auto sig = load_signature(sig_file);
    FinStructure m = load_structure(*sig, m_file);
    FinStructure n = load_structure(*sig, n_file);
    SpanOptions opt;
    if (max_apex) {
        opt.max_apex = *max_apex;
    } else if (const char* env = std::getenv("FOLDS_MAX_APEX"); env && *env) {
        try {
            opt.max_apex = std::stoull(env);
        } catch (const std::exception&) {
            throw InputError{"FOLDS_MAX_APEX", Error(ErrorKind::PreconditionViolation,
                                                     "FOLDS_MAX_APEX must be a number, got '" + std::string(env) + "'")};
        }
    }
    SpanResult r = find_span(m, n, opt);
    Outcome o;
    o.report = {{"status", std::string(to_string(r.status))}, {"fast_path", r.fast_path}, {"steps", r.steps},
                {"max_apex", opt.max_apex}};
    if (r.status != SpanStatus::Found) {
        o.code = kFails;
        o.witness = {{"status", std::string(to_string(r.status))}};
        if (r.status == SpanStatus::NotEquivalent)
            o.text = "not equivalent: both totally saturated and no structure isomorphism\n";
        else
            o.text = "no span found: " + std::string(to_string(r.status)) + "\n";
        return o;
    }
    const Span& s = *r.span;
    o.text = "equivalent: span through " + std::to_string(s.apex.total_size()) + " apex elements\n" +
             print_structure(s.apex) + "left leg:\n" + hom_text(s.apex, m, s.left) + "right leg:\n" +
             hom_text(s.apex, n, s.right);
    o.witness = {{"apex", structure_json(s.apex)},
                 {"left", hom_json(s.apex, m, s.left)},
                 {"right", hom_json(s.apex, n, s.right)},
                 {"left_sections", sections_json(s.apex, m, is_fibsurj(s.apex, m, s.left))},
                 {"right_sections", sections_json(s.apex, n, is_fibsurj(s.apex, n, s.right))}};
    return o;
}

Outcome cmd_hsip(const std::string& sig_file, const std::string& thy_file, const std::string& m_file,
                 const std::string& n_file) {
    auto sig = load_signature(sig_file);
    Theory t = load_theory(*sig, thy_file);
    FinStructure m = load_structure(*sig, m_file);
    FinStructure n = load_structure(*sig, n_file);
    for (const FinStructure* s : {&m, &n}) {
        ModelReport r = check_model(*s, t);
        if (!r.ok) {
            std::string failed;
            for (const auto& a : r.failed) failed += " " + a;
            throw InputError{s == &m ? m_file : n_file,
                             Error(ErrorKind::NotAModel, s->name() + " is not a model of " + t.name + ":" + failed)};
        }
    }
    bool eq = guarded("hsip", [&] { return hsip_decide(m, n); });
    Outcome o;
    o.code = eq ? kHolds : kFails;
    o.report = {{"equivalent", eq}};
    if (!eq) {
        o.text = "not equivalent: no structure isomorphism\n";
        o.witness = {{"reason", "no structure isomorphism"}};
        return o;
    }
    auto iso = structure_iso(m, n);
    o.text = "equivalent: structure isomorphism\n" + hom_text(m, n, *iso);
    o.witness = {{"iso", hom_json(m, n, *iso)}};
    return o;
}

void print_error(const InputError& e, bool as_json, std::ostream& out, std::ostream& err) {
    if (as_json) {
        json diags = json::array();
        for (const auto& d : e.error.diagnostics())
            diags.push_back({{"kind", to_string(d.kind)},
                             {"message", d.message},
                             {"line", d.where.line},
                             {"column", d.where.column}});
        json j = {{"ok", false},
                  {"witness", nullptr},
                  {"report", nullptr},
                  {"error", {{"source", e.source}, {"kind", to_string(e.error.kind())}, {"diagnostics", diags}}}};
        out << j.dump(2) << "\n";
        return;
    }
    for (const auto& d : e.error.diagnostics()) err << "folds: " << e.source << ":" << format_diagnostic(d) << "\n";
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dependent-sorts signatures, generated isomorphism formulas and finite models", "folds"};
    app.require_subcommand(1);
    app.fallthrough();  // --json may follow the subcommand
    bool as_json = false;
    app.add_flag("--json", as_json, "Print one JSON object with keys ok, witness and report");

    std::string f1, f2, f3, f4, expr;
    bool verbose = false, card = false, total = false, fibsurj = false;
    std::optional<int> level;
    std::optional<std::size_t> max_apex;

    auto* check_sig = app.add_subcommand("check-sig", "Parse and validate a signature");
    check_sig->add_option("SIG", f1)->required();
    auto* levels = app.add_subcommand("levels", "Print the level of every sort");
    levels->add_option("SIG", f1)->required();
    auto* compat = app.add_subcommand("compat", "Is the last variable of CTX compatible with SORT");
    compat->add_option("SIG", f1)->required();
    compat->add_option("SORT", f2)->required();
    compat->add_option("CTX", f3)->required();
    auto* gen_iso = app.add_subcommand("gen-iso", "Generate Ind(x,y) for two variables of SORT");
    gen_iso->add_option("SIG", f1)->required();
    gen_iso->add_option("SORT", f2)->required();
    gen_iso->add_flag("--verbose", verbose, "Show each compatible sort and position");
    auto* eval = app.add_subcommand("eval", "Evaluate a closed formula in a structure");
    eval->add_option("SIG", f1)->required();
    eval->add_option("MODEL", f2)->required();
    eval->add_option("-e,--expr", expr, "Formula")->required();
    eval->add_flag("--card", card, "Print the witness count");
    auto* check_model_cmd = app.add_subcommand("check-model", "Check a structure against a theory");
    check_model_cmd->add_option("SIG", f1)->required();
    check_model_cmd->add_option("THEORY", f2)->required();
    check_model_cmd->add_option("MODEL", f3)->required();
    auto* sat = app.add_subcommand("sat", "Saturation profile of a structure");
    sat->add_option("SIG", f1)->required();
    sat->add_option("MODEL", f2)->required();
    auto* level_opt = sat->add_option("--level", level, "Exit 0 iff saturated at every sort of level <= N");
    sat->add_flag("--total", total, "Exit 0 iff saturated at every sort")->excludes(level_opt);
    auto* hom = app.add_subcommand("hom", "Find a homomorphism M -> N");
    hom->add_option("SIG", f1)->required();
    hom->add_option("M", f2)->required();
    hom->add_option("N", f3)->required();
    hom->add_flag("--fibsurj", fibsurj, "Require fiberwise surjectivity");
    auto* equiv = app.add_subcommand("equiv", "Search for a span of fiberwise surjections M <- P -> N");
    equiv->add_option("SIG", f1)->required();
    equiv->add_option("M", f2)->required();
    equiv->add_option("N", f3)->required();
    equiv->add_option("--max-apex", max_apex, "Bound on apex elements per sort (default |M(K)|*|N(K)|)");
    auto* hsip = app.add_subcommand("hsip", "Decide equivalence of saturated height-3 models");
    hsip->add_option("SIG", f1)->required();
    hsip->add_option("THEORY", f2)->required();
    hsip->add_option("M", f3)->required();
    hsip->add_option("N", f4)->required();

    std::vector<const char*> argv{"folds"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kHolds : kInputError;
    }

    try {
        Outcome o;
        if (*check_sig) o = cmd_check_sig(f1);
        else if (*levels) o = cmd_levels(f1);
        else if (*compat) o = cmd_compat(f1, f2, f3);
        else if (*gen_iso) o = cmd_gen_iso(f1, f2, verbose);
        else if (*eval) o = cmd_eval(f1, f2, expr, card);
        else if (*check_model_cmd) o = cmd_check_model(f1, f2, f3);
        else if (*sat) o = cmd_sat(f1, f2, level, total);
        else if (*hom) o = cmd_hom(f1, f2, f3, fibsurj);
        else if (*equiv) o = cmd_equiv(f1, f2, f3, max_apex);
        else o = cmd_hsip(f1, f2, f3, f4);
        if (as_json) {
            json j = {{"ok", o.code == kHolds}, {"witness", o.witness}, {"report", o.report}};
            out << j.dump(2) << "\n";
        } else {
            out << o.text;
        }
        return o.code;
    } catch (const InputError& e) {
        print_error(e, as_json, out, err);
        return kInputError;
    } catch (const Error& e) {
        print_error(InputError{"folds", e}, as_json, out, err);
        return kInputError;
    }
}

}  // namespace folds::cli
