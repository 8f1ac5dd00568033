#include "lobench/metrics.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "lobench/errors.hpp"

namespace lobench {

void ExperimentLog::write_csv(std::ostream& os) const {
  os << "train_step;mean;std;hit\n";
  for (const auto& e : evals)
    os << e.train_step << ';' << e.mean << ';' << e.stddev << ';' << (e.hit ? 1 : 0) << '\n';
}

std::vector<EvalRecord> ExperimentLog::read_csv(std::istream& is) {
  std::vector<EvalRecord> evals;
  std::string line;
  if (!std::getline(is, line) || line != "train_step;mean;std;hit")
    throw_error(ErrorCode::parse, "bad evaluation log header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    EvalRecord rec;
    char sep = 0;
    int hit = 0;
    if (!(ls >> rec.train_step >> sep >> rec.mean >> sep >> rec.stddev >> sep >> hit))
      throw_error(ErrorCode::parse, "bad evaluation log line: " + line);
    rec.hit = hit != 0;
    evals.push_back(rec);
  }
  return evals;
}

bool is_hit(double mean, const OptimalStats& optimal, double tau) {
  return mean <= optimal.expectation + tau * optimal.stddev;
}

double hitting_ratio(const std::vector<EvalRecord>& evals, const OptimalStats& optimal,
                     double tau) {
  if (evals.empty()) throw_error(ErrorCode::undefined_metric, "hitting ratio of an empty log");
  long long hits = 0;
  for (const auto& e : evals)
    if (is_hit(e.mean, optimal, tau)) ++hits;
  return static_cast<double>(hits) / static_cast<double>(evals.size());
}

double hitting_ratio(const ExperimentLog& log, const OptimalStats& optimal, double tau) {
  return hitting_ratio(log.evals, optimal, tau);
}

double ruggedness(const std::vector<EvalRecord>& evals) {
  if (evals.size() < 3)
    throw_error(ErrorCode::undefined_metric, "ruggedness needs at least 3 evaluation records");
  std::vector<double> diffs;
  diffs.reserve(evals.size() - 1);
  for (std::size_t i = 1; i < evals.size(); ++i)
    diffs.push_back(evals[i].mean - evals[i - 1].mean);
  double m = 0.0;
  for (double d : diffs) m += d;
  m /= static_cast<double>(diffs.size());
  double acc = 0.0;
  for (double d : diffs) acc += (d - m) * (d - m);
  return std::sqrt(acc / static_cast<double>(diffs.size()));
}

double ruggedness(const ExperimentLog& log) { return ruggedness(log.evals); }

}  // namespace lobench
