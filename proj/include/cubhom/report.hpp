#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace cubhom {

/// Outcome counts of one identity family (e.g. "face_face").
struct CheckFamily {
  std::string name;
  std::size_t checked = 0;
  std::size_t violations = 0;
};

/**
 * Result of a verification suite.  Violations are data, not errors: every
 * check is counted, and the first few failures keep a readable description.
 */
class Report {
 public:
  static constexpr std::size_t kStoredViolations = 32;

  CheckFamily& family(const std::string& name) {
    auto it = std::find_if(families_.begin(), families_.end(),
                           [&](const CheckFamily& f) { return f.name == name; });
    if (it != families_.end()) return *it;
    families_.push_back({name});
    return families_.back();
  }

  /// Stable handle for hot loops; avoids the name lookup per check.
  std::size_t id(const std::string& name) {
    family(name);
    for (std::size_t k = 0; k < families_.size(); ++k)
      if (families_[k].name == name) return k;
    return 0;  // unreachable
  }

  /// Records one check; `describe` is only invoked on failure.
  template <class Describe>
  bool check(std::size_t family_id, bool ok, Describe&& describe) {
    auto& f = families_[family_id];
    ++f.checked;
    if (!ok) {
      ++f.violations;
      if (messages_.size() < kStoredViolations) messages_.push_back(f.name + ": " + describe());
    }
    return ok;
  }

  template <class Describe>
  bool check(const std::string& name, bool ok, Describe&& describe) {
    return check(id(name), ok, std::forward<Describe>(describe));
  }

  bool check(const std::string& name, bool ok) {
    return check(name, ok, [] { return std::string("violation"); });
  }

  void note(std::string text) { notes_.push_back(std::move(text)); }

  void merge(const Report& other) {
    for (const auto& f : other.families_) {
      auto& mine = family(f.name);
      mine.checked += f.checked;
      mine.violations += f.violations;
    }
    for (const auto& m : other.messages_)
      if (messages_.size() < kStoredViolations) messages_.push_back(m);
    for (const auto& n : other.notes_)
      if (std::find(notes_.begin(), notes_.end(), n) == notes_.end()) notes_.push_back(n);
  }

  std::size_t total_checked() const {
    std::size_t t = 0;
    for (const auto& f : families_) t += f.checked;
    return t;
  }
  std::size_t total_violations() const {
    std::size_t t = 0;
    for (const auto& f : families_) t += f.violations;
    return t;
  }
  bool ok() const { return total_violations() == 0; }

  const std::vector<CheckFamily>& families() const { return families_; }
  const std::vector<std::string>& messages() const { return messages_; }
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  std::vector<CheckFamily> families_;
  std::vector<std::string> messages_;
  std::vector<std::string> notes_;
};

}  // namespace cubhom
