#include "folds/text.hpp"

#include <cctype>
#include <set>

namespace folds {

namespace {

enum class Tok { Ident, Number, Punct, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    SourceLocation where{};
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return cur_; }

    Token next() {
        Token t = cur_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& msg, SourceLocation where) const {
        throw Error(ErrorKind::Syntax, msg, where);
    }
    [[noreturn]] void fail(const std::string& msg) const { fail(msg, cur_.where); }

    bool at(std::string_view punct_or_word) const {
        return cur_.kind != Tok::End && cur_.kind != Tok::Number && cur_.text == punct_or_word;
    }
    bool accept(std::string_view s) {
        if (!at(s)) return false;
        advance();
        return true;
    }
    Token expect(std::string_view s) {
        if (!at(s)) fail("expected '" + std::string(s) + "' but found " + describe(cur_));
        return next();
    }
    Token expect_ident(const char* what) {
        if (cur_.kind != Tok::Ident) fail(std::string("expected ") + what + " but found " + describe(cur_));
        return next();
    }

    static std::string describe(const Token& t) {
        if (t.kind == Tok::End) return "end of input";
        return "'" + t.text + "'";
    }

private:
    void advance() {
        skip_space();
        cur_ = Token{};
        cur_.where = {line_, col_};
        if (pos_ >= src_.size()) return;
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' || src_[pos_] == '\''))
                bump();
            cur_.kind = Tok::Ident;
            cur_.text = std::string(src_.substr(start, pos_ - start));
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) bump();
            cur_.kind = Tok::Number;
            cur_.text = std::string(src_.substr(start, pos_ - start));
            return;
        }
        for (std::string_view p : {"<->", "->", "~="}) {
            if (src_.substr(pos_, p.size()) == p) {
                for (std::size_t i = 0; i < p.size(); ++i) bump();
                cur_.kind = Tok::Punct;
                cur_.text = std::string(p);
                return;
            }
        }
        if (std::string_view("{}()[],;:.=&|").find(c) != std::string_view::npos) {
            bump();
            cur_.kind = Tok::Punct;
            cur_.text = std::string(1, c);
            return;
        }
        throw Error(ErrorKind::Syntax, std::string("unexpected character '") + c + "'", cur_.where);
    }

    void bump() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                bump();
            } else if (c == '#' || (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/')) {
                while (pos_ < src_.size() && src_[pos_] != '\n') bump();
            } else {
                break;
            }
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
    Token cur_;
};

const std::set<std::string>& reserved_words() {
    static const std::set<std::string> words{"forall", "exists", "sigma", "true", "false", "Ind"};
    return words;
}

// ---------------------------------------------------------------- formulas

class FormulaParser {
public:
    FormulaParser(const Signature& sig, Lexer& lex) : sig_(sig), lex_(lex) {}

    Formula formula() {
        Formula lhs = implication();
        if (lex_.accept("<->")) {
            Formula rhs = implication();
            if (lex_.at("<->")) lex_.fail("'<->' does not associate; add parentheses");
            return make_iff(lhs, rhs);
        }
        return lhs;
    }

    std::vector<VarDecl> decls() {
        std::vector<VarDecl> out;
        do {
            out.push_back(decl());
        } while (lex_.accept(","));
        return out;
    }

private:
    Formula implication() {
        Formula lhs = disjunction();
        if (lex_.accept("->")) return make_implies(lhs, implication());
        return lhs;
    }

    Formula disjunction() {
        Formula acc = conjunction();
        while (lex_.accept("|")) acc = make_or(acc, conjunction());
        return acc;
    }

    Formula conjunction() {
        std::vector<Formula> parts{unary()};
        while (lex_.accept("&")) parts.push_back(unary());
        if (parts.size() == 1) return parts.front();
        return make_and(std::move(parts));
    }

    Formula unary() {
        const Token& t = lex_.peek();
        if (lex_.accept("(")) {
            Formula f = formula();
            lex_.expect(")");
            return f;
        }
        if (t.kind != Tok::Ident) lex_.fail("expected a formula but found " + Lexer::describe(t));
        if (lex_.accept("true")) return make_top();
        if (lex_.accept("false")) return make_bottom();
        for (auto [word, kind] : {std::pair{"forall", FormulaKind::Forall}, std::pair{"exists", FormulaKind::Exists},
                                  std::pair{"sigma", FormulaKind::Sigma}}) {
            if (lex_.accept(word)) {
                auto vs = decls();
                lex_.expect(".");
                Formula body = formula();
                for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = make_binder(kind, *it, body);
                return body;
            }
        }
        if (lex_.accept("Ind")) {
            lex_.expect("(");
            std::string x = lex_.expect_ident("a variable").text;
            lex_.expect(",");
            std::string y = lex_.expect_ident("a variable").text;
            lex_.expect(")");
            return make_ind(x, y);
        }
        auto [sort, args] = sort_application();
        if (lex_.accept("~=")) {
            auto [sort2, args2] = sort_application();
            if (sort2 != sort) lex_.fail("both sides of '~=' must use the same sort");
            return make_equiv(sort, std::move(args), std::move(args2));
        }
        return make_atom(sort, std::move(args));
    }

    SortId sort_ref(const Token& t) {
        auto s = sig_.find_sort(t.text);
        if (!s) lex_.fail("unknown sort '" + t.text + "'", t.where);
        return *s;
    }

    std::pair<SortId, std::vector<std::string>> sort_application() {
        Token t = lex_.expect_ident("a sort");
        SortId s = sort_ref(t);
        lex_.expect("(");
        std::vector<std::string> args;
        if (!lex_.at(")")) {
            do {
                args.push_back(lex_.expect_ident("a variable").text);
            } while (lex_.accept(","));
        }
        lex_.expect(")");
        return {s, std::move(args)};
    }

    VarDecl decl() {
        Token name = lex_.expect_ident("a variable");
        if (reserved_words().count(name.text)) lex_.fail("'" + name.text + "' is reserved", name.where);
        lex_.expect(":");
        Token st = lex_.expect_ident("a sort");
        VarDecl d{name.text, sort_ref(st), {}};
        if (lex_.accept("(")) {
            if (!lex_.at(")")) {
                do {
                    d.args.push_back(lex_.expect_ident("a variable").text);
                } while (lex_.accept(","));
            }
            lex_.expect(")");
        }
        return d;
    }

    const Signature& sig_;
    Lexer& lex_;
};

std::vector<std::string> dotted_path(Lexer& lex) {
    std::vector<std::string> out{lex.expect_ident("an arrow").text};
    while (lex.accept(".")) out.push_back(lex.expect_ident("an arrow").text);
    return out;
}

}  // namespace

// ---------------------------------------------------------------- signatures

RawSignature parse_signature_text(std::string_view text) {
    Lexer lex(text);
    RawSignature raw;
    lex.expect("signature");
    raw.name = lex.expect_ident("a signature name").text;
    lex.expect("{");
    while (!lex.accept("}")) {
        lex.expect("sort");
        RawSort rs;
        Token name = lex.expect_ident("a sort name");
        if (reserved_words().count(name.text)) lex.fail("'" + name.text + "' is reserved", name.where);
        rs.name = name.text;
        rs.where = name.where;
        if (lex.accept("[")) {
            lex.expect("level");
            if (lex.peek().kind != Tok::Number) lex.fail("expected a level number");
            rs.declared_level = std::stoi(lex.next().text);
            lex.expect("]");
        }
        if (lex.accept("{")) {
            if (!lex.at("}")) {
                do {
                    Token an = lex.expect_ident("an arrow name");
                    lex.expect(":");
                    Token target = lex.expect_ident("a target sort");
                    rs.arrows.push_back({an.text, target.text, an.where});
                } while (lex.accept(","));
            }
            lex.expect("}");
        }
        if (lex.accept("eq")) {
            lex.expect("{");
            do {
                RawEquation eq;
                eq.where = lex.peek().where;
                eq.lhs = dotted_path(lex);
                lex.expect("=");
                eq.rhs = dotted_path(lex);
                rs.equations.push_back(std::move(eq));
            } while (lex.accept(","));
            lex.expect("}");
        }
        lex.expect(";");
        raw.sorts.push_back(std::move(rs));
    }
    if (lex.peek().kind != Tok::End) lex.fail("trailing input after signature");

    // Arrow names in equations are resolved here so that typos point at the equation.
    for (const auto& rs : raw.sorts) {
        for (const auto& eq : rs.equations) {
            for (const auto* side : {&eq.lhs, &eq.rhs}) {
                const RawSort* at = &rs;
                for (const auto& step : *side) {
                    if (!at) break;
                    const RawArrow* found = nullptr;
                    for (const auto& a : at->arrows)
                        if (a.name == step) found = &a;
                    if (!found)
                        throw Error(ErrorKind::Syntax,
                                    "equation uses undeclared arrow '" + step + "' of sort " + at->name, eq.where);
                    const RawSort* next = nullptr;
                    for (const auto& t : raw.sorts)
                        if (t.name == found->target) next = &t;
                    at = next;
                }
            }
        }
    }
    return raw;
}

Signature parse_signature(std::string_view text) { return validate_signature(parse_signature_text(text)); }

std::string print_signature(const Signature& sig) {
    const auto& raw = sig.source();
    std::string out = "signature " + raw.name + " {\n";
    for (const auto& rs : raw.sorts) {
        out += "  sort " + rs.name;
        if (rs.declared_level) out += " [level " + std::to_string(*rs.declared_level) + "]";
        if (!rs.arrows.empty()) {
            out += " { ";
            for (std::size_t i = 0; i < rs.arrows.size(); ++i) {
                if (i) out += ", ";
                out += rs.arrows[i].name + ": " + rs.arrows[i].target;
            }
            out += " }";
        }
        if (!rs.equations.empty()) {
            out += " eq { ";
            for (std::size_t i = 0; i < rs.equations.size(); ++i) {
                if (i) out += ", ";
                auto path = [](const std::vector<std::string>& p) {
                    std::string s;
                    for (const auto& a : p) s += (s.empty() ? "" : ".") + a;
                    return s;
                };
                out += path(rs.equations[i].lhs) + " = " + path(rs.equations[i].rhs);
            }
            out += " }";
        }
        out += ";\n";
    }
    return out + "}\n";
}

// ---------------------------------------------------------------- structures

RawStructure parse_structure_text(std::string_view text) {
    Lexer lex(text);
    RawStructure raw;
    lex.expect("structure");
    raw.name = lex.expect_ident("a structure name").text;
    lex.expect("over");
    raw.signature = lex.expect_ident("a signature name").text;
    lex.expect("{");
    while (!lex.accept("}")) {
        Token sort = lex.expect_ident("a sort name");
        lex.expect("=");
        lex.expect("{");
        std::vector<RawElement> elems;
        if (!lex.at("}")) {
            do {
                RawElement e;
                e.where = lex.peek().where;
                if (lex.peek().kind == Tok::Ident) {
                    e.name = lex.next().text;
                    lex.accept(":");
                }
                if (lex.accept("(")) {
                    if (!lex.at(")")) {
                        do {
                            e.args.push_back(lex.expect_ident("an element name").text);
                        } while (lex.accept(","));
                    }
                    lex.expect(")");
                } else if (e.name.empty()) {
                    lex.fail("expected an element");
                }
                elems.push_back(std::move(e));
            } while (lex.accept(","));
        }
        lex.expect("}");
        lex.expect(";");
        raw.carriers.emplace_back(sort.text, std::move(elems));
        raw.carrier_locations.push_back(sort.where);
    }
    if (lex.peek().kind != Tok::End) lex.fail("trailing input after structure");
    return raw;
}

FinStructure parse_structure(const Signature& sig, std::string_view text) {
    return validate_structure(sig, parse_structure_text(text));
}

std::string print_structure(const FinStructure& m) {
    const auto& sig = m.signature();
    std::string out = "structure " + m.name() + " over " + sig.name() + " {\n";
    for (auto s : sig.sorts()) {
        out += "  " + sig.sort_name(s) + " = {";
        for (std::uint32_t i = 0; i < m.size(s); ++i) {
            const auto& e = m.element(s, i);
            out += i ? ", " : " ";
            if (!e.name.empty()) out += e.name;
            if (!e.args.empty()) {
                if (!e.name.empty() && sig.level(s) == 1) out += ":";
                out += m.display_boundary(s, e.args);
            } else if (e.name.empty()) {
                out += "()";
            }
        }
        out += m.size(s) ? " };\n" : "};\n";
    }
    return out + "}\n";
}

// ---------------------------------------------------------------- theories

Theory parse_theory(const Signature& sig, std::string_view text) {
    Lexer lex(text);
    Theory t;
    lex.expect("theory");
    t.name = lex.expect_ident("a theory name").text;
    lex.expect("over");
    Token sname = lex.expect_ident("a signature name");
    t.signature = sname.text;
    if (t.signature != sig.name())
        throw Error(ErrorKind::Name, "theory " + t.name + " is over " + t.signature + ", not " + sig.name(), sname.where);
    lex.expect("{");
    FormulaParser fp(sig, lex);
    std::set<std::string> names;
    while (!lex.accept("}")) {
        lex.expect("axiom");
        Token name = lex.expect_ident("an axiom name");
        if (!names.insert(name.text).second) lex.fail("duplicate axiom '" + name.text + "'", name.where);
        lex.expect(":");
        SourceLocation where = lex.peek().where;
        Formula f = fp.formula();
        lex.expect(";");
        try {
            check_formula(Context(sig), f);
        } catch (const Error& e) {
            throw Error(e.kind(), "axiom " + name.text + ": " + e.diagnostics().front().message, where);
        }
        if (!f->free_vars.empty())
            throw Error(ErrorKind::OpenFormula, "axiom " + name.text + " has free variable '" + f->free_vars.front() + "'",
                        where);
        t.axioms.emplace_back(name.text, f);
    }
    if (lex.peek().kind != Tok::End) lex.fail("trailing input after theory");
    return t;
}

std::string print_theory(const Signature& sig, const Theory& t) {
    std::string out = "theory " + t.name + " over " + sig.name() + " {\n";
    for (const auto& [name, f] : t.axioms) out += "  axiom " + name + ": " + print_formula(sig, f) + ";\n";
    return out + "}\n";
}

// ---------------------------------------------------------------- formulas

Formula parse_formula(const Signature& sig, std::string_view text) {
    Lexer lex(text);
    FormulaParser fp(sig, lex);
    Formula f = fp.formula();
    if (lex.peek().kind != Tok::End) lex.fail("unexpected " + Lexer::describe(lex.peek()) + " after formula");
    return f;
}

Context parse_context(const Signature& sig, std::string_view text) {
    Context ctx(sig);
    Lexer lex(text);
    if (lex.peek().kind == Tok::End) return ctx;
    FormulaParser fp(sig, lex);
    for (auto& d : fp.decls()) ctx.add(std::move(d));
    if (lex.peek().kind != Tok::End) lex.fail("unexpected " + Lexer::describe(lex.peek()) + " after context");
    return ctx;
}

}  // namespace folds
