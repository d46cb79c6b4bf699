#pragma once

#include <string>
#include <string_view>

#include "folds/eval.hpp"
#include "folds/signature.hpp"
#include "folds/structure.hpp"
#include "folds/syntax.hpp"

namespace folds {

// File formats. Parse errors carry the line and column of the offending
// token. Comments run from '#' or '//' to the end of the line.
//
//   signature lrg {
//     sort O;
//     sort A { d: O, c: O };
//     sort I [level 1] { i: A } eq { i.d = i.c };
//   }
//
//   structure walk over lcat {
//     O = { a, b };
//     A = { u(a,b), ida(a,a) };
//     I = { (ida), w:(ida) };
//   }
//
//   theory cat over lcat {
//     axiom refl: forall x:O, y:O, f:A(x,y). EqA(f,f);
//   }

RawSignature parse_signature_text(std::string_view text);
Signature parse_signature(std::string_view text);
std::string print_signature(const Signature& sig);

RawStructure parse_structure_text(std::string_view text);
FinStructure parse_structure(const Signature& sig, std::string_view text);
std::string print_structure(const FinStructure& m);

// Axioms are checked against an empty context.
Theory parse_theory(const Signature& sig, std::string_view text);
std::string print_theory(const Signature& sig, const Theory& t);

// Syntactic parse only; scope and sorts are checked by check_formula.
Formula parse_formula(const Signature& sig, std::string_view text);
// Comma-separated declarations, e.g. "x:O, y:O, f:A(x,y)".
Context parse_context(const Signature& sig, std::string_view text);

}  // namespace folds
