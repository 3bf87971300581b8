#pragma once

#include <deque>
#include <stdexcept>
#include <string>
#include <vector>

namespace algdiff {

/// Column-oriented time series. Channel order is insertion order so that
/// emitted files are deterministic.
class SimTrace {
 public:
  void set_time(std::vector<double> t) { time_ = std::move(t); }
  const std::vector<double>& time() const { return time_; }

  /// The returned reference stays valid across later add_channel calls
  /// (deque storage), so scenario loops can hold all channels at once.
  std::vector<double>& add_channel(const std::string& name) {
    names_.push_back(name);
    channels_.emplace_back(time_.size(), 0.0);
    return channels_.back();
  }

  bool has(const std::string& name) const { return find(name) >= 0; }

  const std::vector<double>& channel(const std::string& name) const {
    const int i = find(name);
    if (i < 0) throw std::out_of_range("no trace channel named " + name);
    return channels_[i];
  }

  std::vector<double>& channel(const std::string& name) {
    const int i = find(name);
    if (i < 0) throw std::out_of_range("no trace channel named " + name);
    return channels_[i];
  }

  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return time_.size(); }

 private:
  int find(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return static_cast<int>(i);
    return -1;
  }

  std::vector<double> time_;
  std::vector<std::string> names_;
  std::deque<std::vector<double>> channels_;
};

/// Root-mean-square of a channel against a reference over [t0, t1].
double rms_error(const std::vector<double>& t, const std::vector<double>& a,
                 const std::vector<double>& b, double t0, double t1);

}  // namespace algdiff
