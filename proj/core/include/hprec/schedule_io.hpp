#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "hprec/admm.hpp"
#include "hprec/learn.hpp"
#include "hprec/optim.hpp"

namespace hprec {

enum class ScheduleKind { Pga, Pcmp, Admm };

/// A trained (or hand-set) schedule as persisted on disk:
///   {"kind": "pga"|"pcmp"|"admm", "K" | "I_max", "B", "i_max"?, "steps",
///    "seed", "config", "epsilon"?}
struct ScheduleDocument {
  std::variant<PgaSchedule, PcmpSchedule, AdmmParams> schedule;
  std::uint64_t seed = 0;
  TrainConfig config;
  std::optional<double> epsilon;

  ScheduleKind kind() const { return static_cast<ScheduleKind>(schedule.index()); }
};

std::string_view to_string(ScheduleKind kind);

std::string to_json(const ScheduleDocument& doc);
ScheduleDocument schedule_from_json(std::string_view text);

void save_schedule(const ScheduleDocument& doc, const std::filesystem::path& path);
ScheduleDocument load_schedule(const std::filesystem::path& path);

}  // namespace hprec
