#include "hprec/schedule_io.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "hprec/error.hpp"

namespace hprec {

using nlohmann::json;

namespace {

json config_to_json(const TrainConfig& c) {
  return json{
      {"epochs", c.epochs},
      {"batch_size", c.batch_size},
      {"learning_rate", c.learning_rate},
      {"K", c.iterations},
      {"seed", c.seed},
      {"optimizer", c.optimizer == OptimizerKind::Adam ? "adam" : "sgd"},
      {"adam_beta1", c.adam_beta1},
      {"adam_beta2", c.adam_beta2},
      {"adam_eps", c.adam_eps},
      {"grad_mode", "central_fd"},
      {"fd_step", c.fd_step},
  };
}

TrainConfig config_from_json(const json& j) {
  TrainConfig c;
  c.epochs = j.value("epochs", c.epochs);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.iterations = j.value("K", c.iterations);
  c.seed = j.value("seed", c.seed);
  const auto opt = j.value("optimizer", std::string("adam"));
  if (opt != "adam" && opt != "sgd") fail(ErrorCode::FormatError, "unknown optimizer '" + opt + "'");
  c.optimizer = opt == "adam" ? OptimizerKind::Adam : OptimizerKind::PlainSgd;
  c.adam_beta1 = j.value("adam_beta1", c.adam_beta1);
  c.adam_beta2 = j.value("adam_beta2", c.adam_beta2);
  c.adam_eps = j.value("adam_eps", c.adam_eps);
  c.fd_step = j.value("fd_step", c.fd_step);
  return c;
}

int positive_field(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) {
    fail(ErrorCode::FormatError, std::string("missing integer field '") + key + "'");
  }
  const int v = j.at(key).get<int>();
  if (v < 0) fail(ErrorCode::FormatError, std::string("field '") + key + "' must be >= 0");
  return v;
}

const json& rows_of(const json& steps, std::size_t expected, const char* what) {
  if (!steps.is_array() || steps.size() != expected) {
    fail(ErrorCode::FormatError, std::string("'steps' has the wrong ") + what + " count");
  }
  return steps;
}

double step_value(const json& v) {
  if (!v.is_number()) fail(ErrorCode::FormatError, "'steps' entries must be numbers");
  return v.get<double>();
}

}  // namespace

std::string_view to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::Pga: return "pga";
    case ScheduleKind::Pcmp: return "pcmp";
    case ScheduleKind::Admm: return "admm";
  }
  return "unknown";
}

std::string to_json(const ScheduleDocument& doc) {
  json j;
  j["kind"] = std::string(to_string(doc.kind()));
  if (const auto* s = std::get_if<PgaSchedule>(&doc.schedule)) {
    j["K"] = s->iterations();
    j["B"] = s->bands();
    json rows = json::array();
    for (int k = 0; k < s->iterations(); ++k) {
      json row = json::array();
      for (int c = 0; c <= s->bands(); ++c) row.push_back(s->at(k, c));
      rows.push_back(std::move(row));
    }
    j["steps"] = std::move(rows);
  } else if (const auto* s = std::get_if<PcmpSchedule>(&doc.schedule)) {
    j["K"] = s->iterations();
    j["B"] = s->bands();
    j["i_max"] = s->inner();
    json rows = json::array();
    for (int k = 0; k < s->iterations(); ++k) {
      json inner = json::array();
      for (int i = 0; i < s->inner(); ++i) {
        json row = json::array();
        for (int c = 0; c < s->width(); ++c) row.push_back(s->at(k, i, c));
        inner.push_back(std::move(row));
      }
      rows.push_back(std::move(inner));
    }
    j["steps"] = std::move(rows);
  } else {
    const auto& p = std::get<AdmmParams>(doc.schedule);
    j["I_max"] = p.iterations();
    j["B"] = 1;
    json rows = json::array();
    for (int k = 0; k < p.iterations(); ++k) {
      json row = json::array();
      for (int c = 0; c < AdmmParams::kColumns; ++c) row.push_back(p.at(k, c));
      rows.push_back(std::move(row));
    }
    j["steps"] = std::move(rows);
  }
  j["seed"] = doc.seed;
  j["config"] = config_to_json(doc.config);
  if (doc.epsilon) j["epsilon"] = *doc.epsilon;
  return j.dump(2) + "\n";
}

ScheduleDocument schedule_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::FormatError, std::string("schedule JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string() || !j.contains("steps")) {
    fail(ErrorCode::FormatError, "schedule JSON needs 'kind' and 'steps'");
  }

  ScheduleDocument doc;
  try {
    const auto kind = j.at("kind").get<std::string>();
    const json& steps = j.at("steps");
    if (kind == "pga") {
      const int k_iter = positive_field(j, "K");
      const int bands = positive_field(j, "B");
      PgaSchedule s(k_iter, bands);
      rows_of(steps, static_cast<std::size_t>(k_iter), "iteration");
      for (int k = 0; k < k_iter; ++k) {
        const json& row = rows_of(steps[static_cast<std::size_t>(k)], static_cast<std::size_t>(bands + 1), "column");
        for (int c = 0; c <= bands; ++c) s.at(k, c) = step_value(row[static_cast<std::size_t>(c)]);
      }
      doc.schedule = std::move(s);
    } else if (kind == "pcmp") {
      const int k_iter = positive_field(j, "K");
      const int bands = positive_field(j, "B");
      const int inner = positive_field(j, "i_max");
      PcmpSchedule s(k_iter, inner, bands);
      rows_of(steps, static_cast<std::size_t>(k_iter), "iteration");
      for (int k = 0; k < k_iter; ++k) {
        const json& in = rows_of(steps[static_cast<std::size_t>(k)], static_cast<std::size_t>(inner), "inner");
        for (int i = 0; i < inner; ++i) {
          const json& row = rows_of(in[static_cast<std::size_t>(i)], static_cast<std::size_t>(s.width()), "column");
          for (int c = 0; c < s.width(); ++c) s.at(k, i, c) = step_value(row[static_cast<std::size_t>(c)]);
        }
      }
      doc.schedule = std::move(s);
    } else if (kind == "admm") {
      const int iters = positive_field(j, "I_max");
      AdmmParams s(iters);
      rows_of(steps, static_cast<std::size_t>(iters), "iteration");
      for (int k = 0; k < iters; ++k) {
        const json& row = rows_of(steps[static_cast<std::size_t>(k)], AdmmParams::kColumns, "column");
        for (int c = 0; c < AdmmParams::kColumns; ++c) s.at(k, c) = step_value(row[static_cast<std::size_t>(c)]);
      }
      doc.schedule = std::move(s);
    } else {
      fail(ErrorCode::FormatError, "unknown schedule kind '" + kind + "'");
    }
    doc.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("config")) doc.config = config_from_json(j.at("config"));
    if (j.contains("epsilon")) doc.epsilon = j.at("epsilon").get<double>();
  } catch (const json::exception& e) {
    fail(ErrorCode::FormatError, std::string("schedule JSON: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ShapeMismatch) fail(ErrorCode::FormatError, e.what());
    throw;
  }
  return doc;
}

void save_schedule(const ScheduleDocument& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  out << to_json(doc);
  if (!out) fail(ErrorCode::IoError, "write failed for '" + path.string() + "'");
}

ScheduleDocument load_schedule(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return schedule_from_json(buf.str());
}

}  // namespace hprec
