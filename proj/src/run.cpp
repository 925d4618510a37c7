// Copyright The cavity-dtn Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cavity/run.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace cavity
{

namespace fs = std::filesystem;

namespace
{

std::string indexed_name(const std::string &file, int index, int total)
{
  if (total <= 1) {
    return file;
  }
  const fs::path p(file);
  char suffix[32];
  std::snprintf(suffix, sizeof suffix, "_%03d", index);
  return (p.parent_path() / (p.stem().string() + suffix + p.extension().string())).string();
}

void open_for_write(std::ofstream &out, const fs::path &path)
{
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  out.open(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
}

}  // namespace

PointResult solve_point(const RunConfig &config, double param, const AdaptConfig &adapt,
                        const std::string &mesh_prefix)
{
  PointResult res;
  res.param = param;
  try {
    const Problem problem = config.problem_at(param);
    auto observer = [&](const Solution &sol, const ErrorReport &rep) {
      const std::vector<RcsSample> rcs = backscatter_rcs(sol, problem, param);
      res.history.push_back({rep.iteration, rep.dof, rep.eps_h, rep.eps_N, rcs.back().sigma});
      res.rcs = rcs;
      if (!mesh_prefix.empty()) {
        char name[32];
        std::snprintf(name, sizeof name, "_iter%03d.mesh", rep.iteration);
        std::ofstream out;
        open_for_write(out, mesh_prefix + name);
        write_mesh(out, sol.mesh);
      }
    };
    adaptive_solve(problem, adapt, observer);
    res.ok = true;
  } catch (const NumericalError &e) {
    res.error = e.what();
    res.numerical_failure = true;
  } catch (const std::exception &e) {
    res.error = e.what();
  }
  if (!res.ok) {
    // Keep one row per expected formula so that every sweep point shows up in the CSV.
    res.rcs.clear();
    if (config.R_hat == 0.0) {
      res.rcs.push_back({param, 0.0, RcsFormula::Aperture, false, res.error});
    }
    res.rcs.push_back({param, 0.0, RcsFormula::Semicircle, false, res.error});
  }
  return res;
}

RunReport run(const RunConfig &config, const RunOptions &options)
{
  AdaptConfig adapt = config.adapt;
  if (options.mode) {
    adapt.mode = *options.mode;
  }
  if (options.max_dof) {
    adapt.max_dof = *options.max_dof;
  }
  adapt.validate();

  const std::vector<double> &params = config.sweep.values;
  const int total = static_cast<int>(params.size());
  const fs::path out_dir(options.out_dir);

  std::mutex log_mutex;
  auto log = [&](LogLevel level, const std::string &msg) {
    if (options.log) {
      const std::lock_guard lock(log_mutex);
      options.log(level, msg);
    }
  };

  RunReport report;
  report.curve.pol = config.pol;
  report.points.resize(total);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int i = next++; i < total; i = next++) {
      std::string prefix;
      if (options.write_files && !config.mesh_dir.empty()) {
        char name[32];
        std::snprintf(name, sizeof name, "point%03d", i);
        prefix = (out_dir / config.mesh_dir / name).string();
      }
      PointResult r = solve_point(config, params[i], adapt, prefix);
      std::ostringstream msg;
      msg << "point " << i + 1 << "/" << total << " param " << params[i];
      if (r.ok) {
        msg << ": dof " << r.history.back().dof << ", sigma " << r.rcs.back().sigma;
        log(LogLevel::Info, msg.str());
      } else {
        msg << ": failed: " << r.error;
        log(LogLevel::Warn, msg.str());
      }
      report.points[i] = std::move(r);
    }
  };
  const int nthreads = std::clamp(options.threads, 1, std::max(1, total));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) {
      pool.emplace_back(worker);
    }
    for (auto &th : pool) {
      th.join();
    }
  }

  for (const PointResult &p : report.points) {
    report.failed += p.ok ? 0 : 1;
    report.curve.samples.insert(report.curve.samples.end(), p.rcs.begin(), p.rcs.end());
  }

  if (options.write_files) {
    std::ofstream rcs;
    open_for_write(rcs, out_dir / config.rcs_csv);
    write_rcs_csv(rcs, report.curve);
    for (int i = 0; i < total; ++i) {
      std::ofstream conv;
      open_for_write(conv, out_dir / indexed_name(config.convergence_csv, i, total));
      write_convergence_csv(conv, report.points[i].history);
    }
    log(LogLevel::Debug, "wrote outputs to " + out_dir.string());
  }
  return report;
}

}  // namespace cavity
