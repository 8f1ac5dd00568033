#include "lobench/policy.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "lobench/errors.hpp"

namespace lobench {

namespace {

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  std::string token;
  std::istringstream is(text);
  while (std::getline(is, token, ',')) {
    std::istringstream ts(token);
    int value = 0;
    while (ts >> value) values.push_back(value);
    if (!ts.eof()) throw_error(ErrorCode::parse, "cannot parse integer '" + token + "'");
  }
  return values;
}

std::string join_ints(const std::vector<int>& values) {
  std::ostringstream os;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) os << ',';
    os << values[i];
  }
  return os.str();
}

}  // namespace

Policy::Policy(Portfolio portfolio, std::vector<int> values, bool is_table)
    : portfolio_(std::move(portfolio)), values_(std::move(values)), is_table_(is_table) {}

Policy Policy::from_table(Portfolio portfolio, std::vector<int> table) {
  if (static_cast<int>(table.size()) != portfolio.n)
    throw_error(ErrorCode::invalid_argument, "policy table must have one entry per fitness level");
  for (int r : table)
    if (!portfolio.contains(r))
      throw_error(ErrorCode::invalid_argument,
                  "table radius " + std::to_string(r) + " not in portfolio");
  return Policy(std::move(portfolio), std::move(table), true);
}

Policy Policy::from_breakpoints(Portfolio portfolio, std::vector<int> breakpoints) {
  if (static_cast<int>(breakpoints.size()) != portfolio.size() - 1)
    throw_error(ErrorCode::invalid_argument,
                "expected " + std::to_string(portfolio.size() - 1) + " breaking points");
  int prev = -1;
  for (int b : breakpoints) {
    if (b < -1 || b > portfolio.n - 1)
      throw_error(ErrorCode::invalid_argument,
                  "breaking point " + std::to_string(b) + " outside [-1.." +
                      std::to_string(portfolio.n - 1) + "]");
    if (b < prev)
      throw_error(ErrorCode::invalid_argument, "breaking points must be non-decreasing");
    prev = b;
  }
  return Policy(std::move(portfolio), std::move(breakpoints), false);
}

Policy Policy::constant(int n, int radius) {
  Portfolio p = Portfolio::of(n, {radius});
  return Policy(std::move(p), {}, false);
}

int Policy::operator()(int i) const {
  if (i < 0 || i >= n())
    throw_error(ErrorCode::invalid_argument, "fitness " + std::to_string(i) + " out of range");
  if (is_table_) return values_[static_cast<std::size_t>(i)];
  // First index m (1-based over descending radii) whose breaking point is
  // >= i; sentinels b_0 = -1, b_k = n-1 make the last slot a catch-all.
  const auto it = std::lower_bound(values_.begin(), values_.end(), i);
  const auto m = static_cast<std::size_t>(it - values_.begin());  // 0-based into descending order
  const auto k = portfolio_.radii.size();
  return portfolio_.radii[k - 1 - m];
}

const std::vector<int>& Policy::table() const {
  if (!is_table_) throw_error(ErrorCode::representation, "policy is in breakpoint form");
  return values_;
}

const std::vector<int>& Policy::breakpoints() const {
  if (is_table_) throw_error(ErrorCode::representation, "policy is in table form");
  return values_;
}

Policy Policy::to_table() const {
  if (is_table_) return *this;
  std::vector<int> table(static_cast<std::size_t>(n()));
  for (int i = 0; i < n(); ++i) table[static_cast<std::size_t>(i)] = (*this)(i);
  return Policy(portfolio_, std::move(table), true);
}

Policy Policy::to_breakpoints() const {
  if (!is_table_) return *this;
  for (int i = 1; i < n(); ++i)
    if (values_[static_cast<std::size_t>(i)] > values_[static_cast<std::size_t>(i - 1)])
      throw_error(ErrorCode::representation,
                  "breakpoint encoding undefined for non-monotone table");
  const std::vector<int> desc = portfolio_.descending();
  std::vector<int> breakpoints(desc.size() - 1);
  for (std::size_t m = 0; m + 1 < desc.size(); ++m) {
    // Largest fitness whose radius is >= the m-th largest value; -1 if none.
    int b = -1;
    for (int i = 0; i < n(); ++i)
      if (values_[static_cast<std::size_t>(i)] >= desc[m]) b = i;
    breakpoints[m] = b;
  }
  return Policy(portfolio_, std::move(breakpoints), false);
}

std::string Policy::serialize() const {
  std::ostringstream os;
  os << "n: " << n() << '\n';
  os << "portfolio: " << join_ints(portfolio_.radii) << '\n';
  os << (is_table_ ? "table: " : "breakpoints: ") << join_ints(values_) << '\n';
  return os.str();
}

Policy Policy::parse(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int n = -1;
  std::vector<int> radii;
  bool have_radii = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw_error(ErrorCode::parse, "malformed policy line: " + line);
    const std::string key = line.substr(0, colon);
    const std::string rest = line.substr(colon + 1);
    if (key == "n") {
      n = std::stoi(rest);
    } else if (key == "portfolio") {
      radii = parse_int_list(rest);
      have_radii = true;
    } else if (key == "table" || key == "breakpoints") {
      if (n < 1 || !have_radii)
        throw_error(ErrorCode::parse, "policy header must precede the body");
      Portfolio p = Portfolio::of(n, radii);
      std::vector<int> values = parse_int_list(rest);
      return key == "table" ? from_table(std::move(p), std::move(values))
                            : from_breakpoints(std::move(p), std::move(values));
    } else {
      throw_error(ErrorCode::parse, "unknown policy key: " + key);
    }
  }
  throw_error(ErrorCode::parse, "policy text has no table/breakpoints line");
}

Policy Policy::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_error(ErrorCode::parse, "cannot open policy file " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse(os.str());
}

void Policy::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw_error(ErrorCode::parse, "cannot write policy file " + path);
  out << serialize();
}

}  // namespace lobench
