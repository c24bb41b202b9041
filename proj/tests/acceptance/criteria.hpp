#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace acceptance {

enum class Status { Pass, Fail, Skip };

struct Outcome {
  Status status = Status::Pass;
  std::string detail;
};

struct Criterion {
  std::string name;
  std::optional<double> budget_seconds;  // exceeding it is a failure
  std::function<Outcome()> check;
};

std::vector<Criterion> criteria();

}  // namespace acceptance
