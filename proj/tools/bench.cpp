// Parallel versus serial obligation dispatch, on the corpus and on a batch
// of random invariant checks. Verdicts must agree; times are printed.

#include "oracle.hpp"

#include "agv/analyses/report.hpp"
#include "agv/model/instance.hpp"
#include "agv/model/library.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>

using namespace agv;

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double seconds(F&& f) {
  const auto t0 = Clock::now();
  f();
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void row(const char* what, double serial, double parallel, bool agree) {
  std::printf("%-28s serial %8.2f s  parallel %8.2f s  speedup %5.2fx  %s\n", what, serial, parallel,
              parallel > 0 ? serial / parallel : 0.0, agree ? "verdicts agree" : "VERDICTS DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
  engine::CheckConfig cfg;
  if (argc > 1) cfg.jobs = std::atoi(argv[1]);

  Diagnostics d;
  const auto lib = model::load_library({AGV_CORPUS_DIR "/qfcs"}, d);
  if (!lib) {
    std::cerr << d;
    return 2;
  }
  const auto root = model::instantiate(*lib, "FCS", d);
  analyses::Report serial, parallel;
  const double s1 = seconds([&] { serial = analyses::verify_all(*lib, *root, cfg, d, false); });
  const double p1 = seconds([&] { parallel = analyses::verify_all(*lib, *root, cfg, d, true); });
  bool agree = serial.layers.size() == parallel.layers.size();
  for (std::size_t i = 0; agree && i < serial.layers.size(); ++i)
    for (std::size_t j = 0; j < serial.layers[i].obligations.size(); ++j)
      agree = agree && serial.layers[i].obligations[j].verdict.kind == parallel.layers[i].obligations[j].verdict.kind;
  row("corpus verify (FCS)", s1, p1, agree);

  const auto problems = testing::random_invariant_problems(200, 1);
  std::vector<std::function<engine::Verdict()>> work;
  for (const auto& p : problems) work.emplace_back([&p, &cfg] { return engine::check_invariant(*p.ts, p.property, cfg); });
  std::vector<engine::Verdict> vs, vp;
  const double s2 = seconds([&] { vs = engine::run_serial(work); });
  const double p2 = seconds([&] { vp = engine::run_parallel(work, cfg.jobs); });
  agree = vs.size() == vp.size();
  for (std::size_t i = 0; agree && i < vs.size(); ++i) agree = vs[i].kind == vp[i].kind;
  row("200 random invariants", s2, p2, agree);
  return agree ? 0 : 1;
}
