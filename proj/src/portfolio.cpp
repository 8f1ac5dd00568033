#include "lobench/portfolio.hpp"

#include <algorithm>
#include <sstream>

#include "lobench/errors.hpp"

namespace lobench {

Portfolio Portfolio::of(int n, std::vector<int> radii) {
  if (n < 1) throw_error(ErrorCode::invalid_argument, "portfolio dimension must be >= 1");
  if (radii.empty()) throw_error(ErrorCode::invalid_argument, "portfolio must be nonempty");
  std::sort(radii.begin(), radii.end());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] < 0 || radii[i] > n)
      throw_error(ErrorCode::invalid_argument,
                  "radius " + std::to_string(radii[i]) + " outside [0.." + std::to_string(n) + "]");
    if (i > 0 && radii[i] == radii[i - 1])
      throw_error(ErrorCode::invalid_argument,
                  "duplicate radius " + std::to_string(radii[i]) + " in portfolio");
  }
  Portfolio p;
  p.n = n;
  p.radii = std::move(radii);
  return p;
}

Portfolio Portfolio::full(int n) {
  std::vector<int> radii(static_cast<std::size_t>(n) + 1);
  for (int r = 0; r <= n; ++r) radii[static_cast<std::size_t>(r)] = r;
  return of(n, std::move(radii));
}

bool Portfolio::solvable() const { return contains(1); }

bool Portfolio::contains(int r) const {
  return std::binary_search(radii.begin(), radii.end(), r);
}

std::vector<int> Portfolio::descending() const {
  return {radii.rbegin(), radii.rend()};
}

std::string Portfolio::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (i > 0) os << ' ';
    os << radii[i];
  }
  return os.str();
}

Portfolio parse_portfolio(int n, const std::string& text) {
  std::vector<int> radii;
  std::string token;
  std::istringstream is(text);
  while (std::getline(is, token, ',')) {
    std::istringstream ts(token);
    int value = 0;
    while (ts >> value) radii.push_back(value);
    if (!ts.eof())
      throw_error(ErrorCode::parse, "cannot parse portfolio element '" + token + "'");
  }
  if (radii.empty()) throw_error(ErrorCode::parse, "empty portfolio specification");
  return Portfolio::of(n, std::move(radii));
}

}  // namespace lobench
