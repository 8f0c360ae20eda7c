#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "negdep/measure.hpp"

namespace negdep {

// Subset of {0,1}^n stored as a bitset over configurations (bit c = config c).
class Event {
 public:
  explicit Event(int n);
  static Event from_points(int n, std::uint64_t points);  // n <= 6

  int coords() const { return n_; }
  bool contains(Config c) const {
    return bits_[c >> 6] >> (c & 63) & 1;
  }
  void insert(Config c) { bits_[c >> 6] |= std::uint64_t(1) << (c & 63); }
  void erase(Config c) { bits_[c >> 6] &= ~(std::uint64_t(1) << (c & 63)); }
  std::uint64_t count() const;
  Event complement() const;
  Event intersect(const Event& other) const;
  std::vector<Config> members() const;
  std::uint64_t points_word() const;  // n <= 6
  bool operator==(const Event& other) const = default;

 private:
  int n_;
  std::vector<std::uint64_t> bits_;
};

bool is_increasing(const Event& a);

// Coordinates i such that flipping eta_i changes membership for some eta.
std::vector<int> affecting_coords(const Event& a);

// Streams every up-set of {0,1}^m as a point mask (bit c = config c in the
// set), in a fixed deterministic order. The visitor returns false to stop.
// m <= 6; the stream for m = 6 has 7,828,354 entries.
void enumerate_upsets(int m, const std::function<bool(std::uint64_t)>& visit);

std::uint64_t count_upsets(int m);

// Up-sets on m <= 5 coordinates, materialized once and cached.
const std::vector<std::uint64_t>& upsets_table(int m);

// Event on n coordinates determined by `coords` whose induced sub-cube
// membership is the up-set `points` over those coordinates.
Event cylinder_event(int n, const std::vector<int>& coords,
                     std::uint64_t points);

// Streams pairs (A, B) of increasing events with A determined by the
// coordinates in I and B by the complementary coordinates. Together with the
// other choices of I this covers every disjointly affecting increasing pair.
void disjointly_affecting_pairs(
    int n, const std::vector<int>& I,
    const std::function<bool(const Event&, const Event&)>& visit);

}  // namespace negdep
