#include <benchmark/benchmark.h>

#include "folds/eval.hpp"
#include "folds/homspan.hpp"
#include "folds/isogen.hpp"
#include "folds/stdlib.hpp"

using namespace folds;

namespace {

void BM_IsoFormula(benchmark::State& state, const char* sig_name, const char* sort) {
    const auto& sig = builtin_signature(sig_name);
    SortId k = sig.sort(sort);
    for (auto _ : state) benchmark::DoNotOptimize(iso_formula(sig, k));
}
BENCHMARK_CAPTURE(BM_IsoFormula, lrg_eq_A, "lrg_eq", "A");
BENCHMARK_CAPTURE(BM_IsoFormula, lcat_A, "lcat", "A");
BENCHMARK_CAPTURE(BM_IsoFormula, lcat_O, "lcat", "O");

void BM_SaturationProfile(benchmark::State& state, const char* name) {
    const auto& m = corpus_entry(name).structure;
    for (auto _ : state) benchmark::DoNotOptimize(saturation_profile(m));
}
BENCHMARK_CAPTURE(BM_SaturationProfile, arrow2, "arrow2");
BENCHMARK_CAPTURE(BM_SaturationProfile, walkiso, "walkiso");
BENCHMARK_CAPTURE(BM_SaturationProfile, commsquare, "commsquare");

void BM_CheckModel(benchmark::State& state, const char* name) {
    const auto& m = corpus_entry(name).structure;
    Theory t = tcat_axioms();
    for (auto _ : state) benchmark::DoNotOptimize(check_model(m, t));
}
BENCHMARK_CAPTURE(BM_CheckModel, chain3, "chain3");
BENCHMARK_CAPTURE(BM_CheckModel, commsquare, "commsquare");

void BM_FindSpan(benchmark::State& state, const char* a, const char* b, bool fast) {
    const auto& m = corpus_entry(a).structure;
    const auto& n = corpus_entry(b).structure;
    SpanOptions opt;
    opt.use_fast_path = fast;
    for (auto _ : state) benchmark::DoNotOptimize(find_span(m, n, opt));
}
BENCHMARK_CAPTURE(BM_FindSpan, walkiso_termcat, "walkiso", "termcat", true);
BENCHMARK_CAPTURE(BM_FindSpan, arrow2_relabeled_search, "arrow2", "arrow2_relabeled", false);
BENCHMARK_CAPTURE(BM_FindSpan, arrow2_chain3_search, "arrow2", "chain3", false);

void BM_StructureIso(benchmark::State& state) {
    const auto& m = corpus_entry("commsquare").structure;
    for (auto _ : state) benchmark::DoNotOptimize(structure_iso(m, m));
}
BENCHMARK(BM_StructureIso);

}  // namespace
BENCHMARK_MAIN();
