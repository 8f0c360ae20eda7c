#include "negdep/events.hpp"

#include <array>
#include <mutex>

#include "negdep/errors.hpp"

namespace negdep {

Event::Event(int n) : n_(n) {
  if (n < 1 || n > kMaxCoords) {
    fail(ErrorCode::CapExceeded, "event coordinate count out of range");
  }
  bits_.assign(((std::size_t(1) << n) + 63) / 64, 0);
}

Event Event::from_points(int n, std::uint64_t points) {
  if (n > 6) fail(ErrorCode::CapExceeded, "point mask only covers n <= 6");
  Event e(n);
  if (n == 6) {
    e.bits_[0] = points;
  } else {
    e.bits_[0] = points & ((std::uint64_t(1) << (std::size_t(1) << n)) - 1);
  }
  return e;
}

std::uint64_t Event::count() const {
  std::uint64_t c = 0;
  for (std::uint64_t word : bits_) c += __builtin_popcountll(word);
  return c;
}

Event Event::complement() const {
  Event e(n_);
  for (std::size_t i = 0; i < bits_.size(); ++i) e.bits_[i] = ~bits_[i];
  const std::size_t total = std::size_t(1) << n_;
  const std::size_t tail = total & 63;
  if (tail) e.bits_.back() &= (std::uint64_t(1) << tail) - 1;
  return e;
}

Event Event::intersect(const Event& other) const {
  if (other.n_ != n_) fail(ErrorCode::DimensionMismatch, "event size mismatch");
  Event e(n_);
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    e.bits_[i] = bits_[i] & other.bits_[i];
  }
  return e;
}

std::vector<Config> Event::members() const {
  std::vector<Config> out;
  for (Config c = 0; c < (Config(1) << n_); ++c) {
    if (contains(c)) out.push_back(c);
  }
  return out;
}

std::uint64_t Event::points_word() const {
  if (n_ > 6) fail(ErrorCode::CapExceeded, "point mask only covers n <= 6");
  return bits_[0];
}

bool is_increasing(const Event& a) {
  const Config total = Config(1) << a.coords();
  for (Config c = 0; c < total; ++c) {
    if (!a.contains(c)) continue;
    for (int i = 0; i < a.coords(); ++i) {
      if (!(c >> i & 1) && !a.contains(c | (Config(1) << i))) return false;
    }
  }
  return true;
}

std::vector<int> affecting_coords(const Event& a) {
  std::vector<int> out;
  const Config total = Config(1) << a.coords();
  for (int i = 0; i < a.coords(); ++i) {
    for (Config c = 0; c < total; ++c) {
      if (c >> i & 1) continue;
      if (a.contains(c) != a.contains(c | (Config(1) << i))) {
        out.push_back(i);
        break;
      }
    }
  }
  return out;
}

namespace {

// In/out decisions over configurations in descending mask order. Every strict
// superset of a configuration has a larger mask, so it is already decided:
// a configuration may join only when all its immediate supersets are in.
void upset_dfs(int m, int next, std::uint64_t current, bool& keep_going,
               const std::function<bool(std::uint64_t)>& visit) {
  if (!keep_going) return;
  if (next < 0) {
    keep_going = visit(current);
    return;
  }
  const Config c = static_cast<Config>(next);
  upset_dfs(m, next - 1, current, keep_going, visit);  // c stays out
  if (!keep_going) return;
  bool closed = true;
  for (int i = 0; i < m && closed; ++i) {
    if (!(c >> i & 1)) {
      closed = (current >> (c | (Config(1) << i))) & 1;
    }
  }
  if (closed) {
    upset_dfs(m, next - 1, current | (std::uint64_t(1) << next), keep_going,
              visit);
  }
}

}  // namespace

void enumerate_upsets(int m, const std::function<bool(std::uint64_t)>& visit) {
  if (m < 1 || m > 6) {
    fail(ErrorCode::CapExceeded, "up-set enumeration supports 1 <= n <= 6");
  }
  bool keep_going = true;
  upset_dfs(m, (1 << m) - 1, 0, keep_going, visit);
}

std::uint64_t count_upsets(int m) {
  std::uint64_t c = 0;
  enumerate_upsets(m, [&c](std::uint64_t) {
    ++c;
    return true;
  });
  return c;
}

const std::vector<std::uint64_t>& upsets_table(int m) {
  if (m < 1 || m > 5) {
    fail(ErrorCode::CapExceeded, "up-set table supports 1 <= n <= 5");
  }
  static std::array<std::vector<std::uint64_t>, 6> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  if (cache[m].empty()) {
    enumerate_upsets(m, [&](std::uint64_t points) {
      cache[m].push_back(points);
      return true;
    });
  }
  return cache[m];
}

Event cylinder_event(int n, const std::vector<int>& coords,
                     std::uint64_t points) {
  Event e(n);
  const int k = static_cast<int>(coords.size());
  for (Config c = 0; c < (Config(1) << n); ++c) {
    Config sub = 0;
    for (int j = 0; j < k; ++j) {
      if (c >> coords[j] & 1) sub |= Config(1) << j;
    }
    if (points >> sub & 1) e.insert(c);
  }
  return e;
}

void disjointly_affecting_pairs(
    int n, const std::vector<int>& I,
    const std::function<bool(const Event&, const Event&)>& visit) {
  if (n < 1 || n > 6) {
    fail(ErrorCode::CapExceeded, "pair streaming supports 1 <= n <= 6");
  }
  std::vector<int> J;
  Config imask = 0;
  for (int c : I) imask |= Config(1) << c;
  for (int i = 0; i < n; ++i) {
    if (!(imask >> i & 1)) J.push_back(i);
  }
  if (I.empty() || J.empty()) {
    fail(ErrorCode::ParameterOutOfRange,
         "coordinate split must have two nonempty sides");
  }
  bool keep_going = true;
  enumerate_upsets(static_cast<int>(I.size()), [&](std::uint64_t a_points) {
    const Event a = cylinder_event(n, I, a_points);
    enumerate_upsets(static_cast<int>(J.size()), [&](std::uint64_t b_points) {
      keep_going = visit(a, cylinder_event(n, J, b_points));
      return keep_going;
    });
    return keep_going;
  });
}

}  // namespace negdep
