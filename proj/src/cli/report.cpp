// Copyright 2026 The cohist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cohist/report.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <sstream>

namespace cohist {

namespace {

constexpr int kMachineDigits = 12;
constexpr int kHumanDigits = 6;

std::string format_number(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

void render_tree(std::ostringstream& out, const ordered_json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const auto scalar = [](const ordered_json& v) -> std::string {
    if (v.is_number_float()) return format_number(v.get<double>(), kHumanDigits);
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
  };
  const auto is_flat = [](const ordered_json& v) {
    if (!v.is_array()) return false;
    for (const auto& x : v) {
      if (x.is_structured()) return false;
    }
    return true;
  };
  const auto is_record = [](const ordered_json& v) {
    for (const auto& [k, x] : v.items()) {
      if (!x.is_primitive()) return false;
    }
    return true;
  };
  for (const auto& [key, value] : j.items()) {
    const std::string label = j.is_array() ? "-" : key + ":";
    if (value.is_primitive()) {
      out << pad << label << ' ' << scalar(value) << '\n';
    } else if (j.is_array() && value.is_object() && is_record(value)) {
      out << pad << '-';
      for (const auto& [k, v] : value.items()) out << ' ' << k << '=' << scalar(v);
      out << '\n';
    } else if (value.empty()) {
      out << pad << label << (value.is_array() ? " (none)" : " {}") << '\n';
    } else if (is_flat(value)) {
      out << pad << label;
      for (const auto& x : value) out << ' ' << scalar(x);
      out << '\n';
    } else {
      out << pad << label << '\n';
      render_tree(out, value, indent + 1);
    }
  }
}

}  // namespace

double round_significant(double x, int digits) {
  if (!std::isfinite(x) || x == 0.0) return x;
  return std::strtod(format_number(x, digits).c_str(), nullptr);
}

ordered_json round_numbers(const ordered_json& j, int digits) {
  if (j.is_number_float()) return round_significant(j.get<double>(), digits);
  if (!j.is_structured()) return j;
  ordered_json out = j;
  for (auto& [key, value] : out.items()) value = round_numbers(value, digits);
  return out;
}

ordered_json to_json(const Report& r) {
  ordered_json j;
  j["command"] = r.command;
  j["arguments"] = r.arguments;
  j["settings"] = r.settings;
  j["inputs_digest"] = r.inputs_digest;
  j["summary"] = r.summary;
  j["results"] = r.results;
  j["warnings"] = r.warnings;
  j["exit_status"] = r.exit_status;
  return j;
}

Report report_from_json(const ordered_json& j) {
  try {
    Report r;
    r.command = j.at("command").get<std::string>();
    r.arguments = j.at("arguments").get<std::vector<std::string>>();
    r.settings = j.at("settings");
    r.inputs_digest = j.at("inputs_digest").get<std::string>();
    r.summary = j.at("summary").get<std::string>();
    r.results = j.at("results");
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    r.exit_status = j.at("exit_status").get<int>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError(std::string("malformed report: ") + e.what());
  }
}

std::string render_machine(const Report& r) {
  return round_numbers(to_json(r), kMachineDigits).dump(2) + "\n";
}

std::string render_human(const Report& r) {
  std::ostringstream out;
  out << r.command << ": " << r.summary << '\n';
  render_tree(out, r.results, 1);
  for (const auto& w : r.warnings) out << "warning: " << w << '\n';
  out << "inputs " << r.inputs_digest << '\n';
  return out.str();
}

std::string sha256_hex(std::string_view data) {
  const std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(
      EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static const char* const hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

}  // namespace cohist
