#include "folds/syntax.hpp"

namespace folds {

namespace {

// Binding strength; binders extend as far right as possible.
int precedence(FormulaKind k) {
    switch (k) {
        case FormulaKind::Forall:
        case FormulaKind::Exists:
        case FormulaKind::Sigma: return 0;
        case FormulaKind::Iff: return 1;
        case FormulaKind::Implies: return 2;
        case FormulaKind::Or: return 3;
        case FormulaKind::And: return 4;
        default: return 5;
    }
}

std::string args_text(const std::vector<std::string>& args) {
    std::string out = "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ',';
        out += args[i];
    }
    return out + ")";
}

void emit(const Signature& sig, const Formula& f, std::string& out);

void emit_child(const Signature& sig, const Formula& c, bool parens, std::string& out) {
    if (parens) out += '(';
    emit(sig, c, out);
    if (parens) out += ')';
}

void emit(const Signature& sig, const Formula& f, std::string& out) {
    const int prec = precedence(f->kind);
    switch (f->kind) {
        case FormulaKind::Top: out += "true"; return;
        case FormulaKind::Bottom: out += "false"; return;
        case FormulaKind::Atom: out += sig.sort_name(f->sort) + args_text(f->args); return;
        case FormulaKind::Equiv:
            out += sig.sort_name(f->sort) + args_text(f->args) + " ~= " + sig.sort_name(f->sort) +
                   args_text(f->rhs_args);
            return;
        case FormulaKind::Ind: out += "Ind(" + f->args[0] + "," + f->args[1] + ")"; return;
        case FormulaKind::And:
            for (std::size_t i = 0; i < f->children.size(); ++i) {
                if (i) out += " & ";
                emit_child(sig, f->children[i], precedence(f->children[i]->kind) <= prec, out);
            }
            return;
        case FormulaKind::Or:
        case FormulaKind::Implies:
        case FormulaKind::Iff: {
            const char* op = f->kind == FormulaKind::Or ? " | " : f->kind == FormulaKind::Implies ? " -> " : " <-> ";
            const auto& l = f->children[0];
            const auto& r = f->children[1];
            // Or associates left, Implies right, Iff not at all.
            bool lp = precedence(l->kind) < prec || (precedence(l->kind) == prec && f->kind != FormulaKind::Or);
            bool rp = precedence(r->kind) < prec || (precedence(r->kind) == prec && f->kind != FormulaKind::Implies);
            emit_child(sig, l, lp, out);
            out += op;
            emit_child(sig, r, rp, out);
            return;
        }
        case FormulaKind::Forall:
        case FormulaKind::Exists:
        case FormulaKind::Sigma:
            out += f->kind == FormulaKind::Forall ? "forall " : f->kind == FormulaKind::Exists ? "exists " : "sigma ";
            out += print_decl(sig, f->binder);
            out += ". ";
            emit(sig, f->children[0], out);
            return;
    }
}

}  // namespace

std::string print_decl(const Signature& sig, const VarDecl& d) {
    std::string out = d.name + ":" + sig.sort_name(d.sort);
    if (!d.args.empty()) out += args_text(d.args);
    return out;
}

std::string print_formula(const Signature& sig, const Formula& f) {
    std::string out;
    emit(sig, f, out);
    return out;
}

std::string print_context(const Context& ctx) {
    std::string out;
    for (const auto& d : ctx.decls()) {
        if (!out.empty()) out += ", ";
        out += print_decl(ctx.signature(), d);
    }
    return out;
}

}  // namespace folds
