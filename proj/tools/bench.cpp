// Times the serial reference kernels against the OpenMP kernels and checks
// that both produce the same bits.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>
#include <omp.h>

#include "cemix/ce_engine.hpp"
#include "cemix/estimator.hpp"
#include "cemix/models.hpp"

namespace {

template <class F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Case {
  std::string name;
  const cemix::Model* model;
  cemix::MixtureParam theta;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reference vs parallel kernel benchmark"};
  std::size_t n = 200000;
  std::size_t pilot = 20000;
  app.add_option("-n", n, "Final sample size");
  app.add_option("--pilot", pilot, "Pilot sample size");
  CLI11_PARSE(app, argc, argv);

  const cemix::AsianCall asian(cemix::AsianSpec{});
  cemix::CevSpec cev_spec;
  cev_spec.strike = 65.0;
  const cemix::CevDigital cev(cev_spec);
  const Case cases[] = {{"asian_call", &asian, asian.approx_init()},
                        {"cev_digital", &cev, cev.approx_init()}};

  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-12s %-14s %10s %10s %8s %s\n", "model", "kernel", "ref_s", "par_s", "speedup", "match");
  bool all_match = true;
  const cemix::RngStream stream{7};
  for (const auto& c : cases) {
    cemix::EstimateReport ref, par;
    const double tr = seconds([&] {
      ref = cemix::is_estimate(*c.model, c.theta, n, stream, cemix::Exec::reference);
    });
    const double tp = seconds([&] {
      par = cemix::is_estimate(*c.model, c.theta, n, stream, cemix::Exec::parallel);
    });
    // Block-merged moments differ from one serial pass in the last bits only.
    const bool match = std::abs(ref.estimate - par.estimate) <= 1e-12 * std::abs(ref.estimate) &&
                       std::abs(ref.std_error - par.std_error) <= 1e-9 * ref.std_error;
    all_match = all_match && match;
    std::printf("%-12s %-14s %10.3f %10.3f %8.2f %s\n", c.name.c_str(), "is_estimate", tr, tp, tr / tp,
                match ? "yes" : "NO");

    cemix::CeConfig cfg;
    cfg.pilot_size = pilot;
    cemix::CeResult cr, cp;
    const double ur = seconds([&] { cr = cemix::run_ce(*c.model, c.theta, cfg, stream, cemix::Exec::reference); });
    const double up = seconds([&] { cp = cemix::run_ce(*c.model, c.theta, cfg, stream, cemix::Exec::parallel); });
    const bool same = cr.theta.weights == cp.theta.weights && cr.theta.tilts == cp.theta.tilts;
    all_match = all_match && same;
    std::printf("%-12s %-14s %10.3f %10.3f %8.2f %s\n", c.name.c_str(), "run_ce", ur, up, ur / up,
                same ? "yes" : "NO");
  }
  return all_match ? EXIT_SUCCESS : EXIT_FAILURE;
}
