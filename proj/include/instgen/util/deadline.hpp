#ifndef INSTGEN_UTIL_DEADLINE_HPP
#define INSTGEN_UTIL_DEADLINE_HPP

#include <chrono>

namespace instgen {

/// A point on the steady clock after which work should stop.
class Deadline
{
public:
  using clock = std::chrono::steady_clock;

  static Deadline never() { return Deadline(clock::time_point::max()); }
  static Deadline after(double seconds)
  {
    if (seconds <= 0.0) { return Deadline(clock::now()); }
    if (seconds > 1e9) { return never(); }
    return Deadline(clock::now() + std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(seconds)));
  }

  [[nodiscard]] bool expired() const { return at_ != clock::time_point::max() && clock::now() >= at_; }
  [[nodiscard]] double remaining_s() const
  {
    if (at_ == clock::time_point::max()) { return 1e18; }
    return std::chrono::duration<double>(at_ - clock::now()).count();
  }

private:
  explicit Deadline(clock::time_point at) : at_(at) {}
  clock::time_point at_;
};

class Stopwatch
{
public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  [[nodiscard]] double seconds() const
  {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace instgen

#endif
