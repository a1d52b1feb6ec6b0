// Benchmark of the batch objective/gradient kernels: the serial reference
// loop against the OpenMP version, which must produce bit-identical output.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "sdqc/crf.hpp"
#include "sdqc/rng.hpp"

namespace {

using sdqc::CrfInstance;
using sdqc::CrfModel;
using sdqc::InstanceShape;

std::vector<CrfInstance> random_instances(int count, int max_nodes, int width,
                                          sdqc::Rng& rng) {
  std::vector<CrfInstance> instances;
  instances.reserve(count);
  for (int k = 0; k < count; ++k) {
    const std::size_t n = 1 + rng.next_below(max_nodes);
    std::vector<int> parent(n, -1);
    for (std::size_t i = 1; i < n; ++i)
      parent[i] = static_cast<int>(rng.next_below(i));
    CrfInstance inst;
    inst.shape = InstanceShape::from_parents(std::move(parent));
    inst.features.resize(n);
    inst.gold.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      inst.features[i].resize(width);
      for (int f = 0; f < width; ++f)
        inst.features[i][f] = rng.next_gaussian();
      inst.gold[i] =
          sdqc::kLabelOrder[rng.next_below(sdqc::kNumLabels)];
    }
    instances.push_back(std::move(inst));
  }
  return instances;
}

double best_of(int repeats, const std::function<void()>& fn) {
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best,
                    std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial reference vs OpenMP batch gradient benchmark"};
  int count = 400;
  int max_nodes = 24;
  int width = 64;
  int repeats = 5;
  std::uint64_t seed = 7;
  app.add_option("--instances", count, "Number of instances");
  app.add_option("--max-nodes", max_nodes, "Maximum nodes per instance");
  app.add_option("--width", width, "Feature width");
  app.add_option("--repeats", repeats, "Timed repetitions (best is kept)");
  app.add_option("--seed", seed, "Generator seed");
  CLI11_PARSE(app, argc, argv);

  sdqc::Rng rng(seed);
  const std::vector<CrfInstance> instances =
      random_instances(count, max_nodes, width, rng);
  std::size_t total_nodes = 0;
  for (const CrfInstance& inst : instances) total_nodes += inst.size();

  sdqc::FeatureLayout layout;
  layout.add("features", width);
  CrfModel model(layout, sdqc::TrainMode::TreeCrf, 1.0);
  std::vector<double> params = model.pack();
  for (double& p : params) p = 0.1 * rng.next_gaussian();
  model.unpack(params);

  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::printf("instances=%d  nodes=%zu  width=%d  threads=%d\n", count,
              total_nodes, width, threads);

  std::vector<double> grad_serial;
  std::vector<double> grad_parallel;
  double obj_serial = 0.0;
  double obj_parallel = 0.0;

  const double t_serial = best_of(repeats, [&] {
    obj_serial =
        sdqc::objective_value(model, instances, sdqc::TrainMode::TreeCrf, false);
    grad_serial =
        sdqc::gradient(model, instances, sdqc::TrainMode::TreeCrf, false);
  });
  const double t_parallel = best_of(repeats, [&] {
    obj_parallel =
        sdqc::objective_value(model, instances, sdqc::TrainMode::TreeCrf, true);
    grad_parallel =
        sdqc::gradient(model, instances, sdqc::TrainMode::TreeCrf, true);
  });

  const bool same_obj = std::memcmp(&obj_serial, &obj_parallel,
                                    sizeof(double)) == 0;
  const bool same_grad =
      grad_serial.size() == grad_parallel.size() &&
      std::memcmp(grad_serial.data(), grad_parallel.data(),
                  grad_serial.size() * sizeof(double)) == 0;

  std::printf("serial   : %9.3f ms\n", t_serial);
  std::printf("parallel : %9.3f ms\n", t_parallel);
  std::printf("speedup  : %9.2fx\n", t_serial / t_parallel);
  std::printf("bit-identical objective: %s\n", same_obj ? "yes" : "NO");
  std::printf("bit-identical gradient : %s\n", same_grad ? "yes" : "NO");
  return (same_obj && same_grad) ? 0 : 1;
}
