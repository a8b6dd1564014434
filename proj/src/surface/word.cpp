#include <algorithm>
#include <numeric>
#include <sstream>

#include "hypgeo/error.hpp"
#include "hypgeo/surface.hpp"

namespace hypgeo {

Word free_reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (int x : w) {
    if (x == 0) throw Error(ErrorKind::ConfigError, "letter 0 in word");
    if (!out.empty() && out.back() == -x)
      out.pop_back();
    else
      out.push_back(x);
  }
  return out;
}

bool is_freely_reduced(const Word& w) {
  for (std::size_t i = 1; i < w.size(); ++i)
    if (w[i] == -w[i - 1]) return false;
  return true;
}

Word inverse(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (int& x : out) x = -x;
  return out;
}

std::string word_string(const Word& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(w[i]);
  }
  return s;
}

Word parse_word(const std::string& s) {
  std::istringstream in(s);
  Word w;
  int x;
  while (in >> x) {
    if (x == 0) throw Error(ErrorKind::ConfigError, "letter 0 in word");
    w.push_back(x);
  }
  if (!in.eof()) throw Error(ErrorKind::ConfigError, "malformed word: " + s);
  return w;
}

Mat2 evaluate(const std::vector<Mat2>& gens, const Word& w) {
  Mat2 m = Mat2::identity();
  for (int x : w) {
    int i = std::abs(x) - 1;
    if (i < 0 || i >= static_cast<int>(gens.size()))
      throw Error(ErrorKind::ConfigError, "letter out of range");
    m = m * (x > 0 ? gens[i] : gens[i].inverse());
  }
  return m;
}

Perm perm_inverse(const Perm& p) {
  Perm q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[p[i]] = static_cast<int>(i);
  return q;
}

int act(const std::vector<Perm>& perms, int sheet, const Word& w) {
  for (int x : w) {
    const Perm& p = perms[std::abs(x) - 1];
    if (x > 0) {
      sheet = p[sheet];
    } else {
      sheet = static_cast<int>(std::find(p.begin(), p.end(), sheet) - p.begin());
    }
  }
  return sheet;
}

Perm word_perm(const std::vector<Perm>& perms, const Word& w) {
  int n = perms.empty() ? 0 : static_cast<int>(perms[0].size());
  std::vector<Perm> inv;
  for (const Perm& p : perms) inv.push_back(perm_inverse(p));
  Perm out(n);
  for (int i = 0; i < n; ++i) {
    int s = i;
    for (int x : w) s = x > 0 ? perms[x - 1][s] : inv[-x - 1][s];
    out[i] = s;
  }
  return out;
}

bool is_transitive(const std::vector<Perm>& perms, int n) {
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int i = stack.back();
    stack.pop_back();
    for (const Perm& p : perms) {
      for (int j : {p[i], static_cast<int>(std::find(p.begin(), p.end(), i) - p.begin())}) {
        if (!seen[j]) {
          seen[j] = 1;
          ++count;
          stack.push_back(j);
        }
      }
    }
  }
  return count == n;
}

}  // namespace hypgeo
