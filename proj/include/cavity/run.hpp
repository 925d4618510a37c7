// Copyright The cavity-dtn Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef CAVITY_RUN_HPP
#define CAVITY_RUN_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cavity/config.hpp"
#include "cavity/rcs.hpp"

namespace cavity
{

enum class LogLevel
{
  Debug,
  Info,
  Warn
};

struct RunOptions
{
  int threads = 1;
  std::optional<RefinementMode> mode;  // overrides the config
  std::optional<int> max_dof;          // overrides the config
  std::string out_dir = ".";
  bool write_files = true;
  // Receives progress messages; calls are serialized.
  std::function<void(LogLevel, const std::string &)> log;
};

// Outcome of one sweep point.
struct PointResult
{
  double param = 0.0;
  bool ok = false;
  bool numerical_failure = false;  // false with !ok means an input problem
  std::string error;
  std::vector<ConvergenceRow> history;
  std::vector<RcsSample> rcs;  // aperture first when available
};

struct RunReport
{
  RcsCurve curve;
  std::vector<PointResult> points;  // sweep order
  int failed = 0;
};

// Adaptive (or uniform) solve of one sweep point; never throws for solver failures, the
// error is stored in the result instead. mesh_prefix, when non-empty, receives one mesh file
// per iteration named <prefix>_iterNNN.mesh.
PointResult solve_point(const RunConfig &config, double param, const AdaptConfig &adapt,
                        const std::string &mesh_prefix = {});

// Runs the whole sweep, points in parallel, and writes the RCS CSV, the convergence CSV(s)
// and optional mesh dumps below options.out_dir. Results do not depend on the thread count.
// Sweeps with several points write one convergence file per point, with the point index
// appended to the file stem (convergence_007.csv).
RunReport run(const RunConfig &config, const RunOptions &options);

}  // namespace cavity

#endif  // CAVITY_RUN_HPP
