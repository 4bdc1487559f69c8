#include "pfrlab/design.hpp"

#include <fstream>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace pfrlab {

using nlohmann::json;

CliffordCircuit GstDesign::circuit_of(const SequenceSpec& s) const {
  CliffordCircuit c;
  c.gates.reserve(s.flat.size());
  for (int slot : s.flat) c.gates.push_back(gate_set.at(slot));
  return c;
}

std::size_t GstDesign::max_flat_length() const {
  std::size_t m = 0;
  for (const auto& s : sequences) m = std::max(m, s.flat.size());
  return m;
}

std::vector<int> expand(std::span<const int> prep_fid,
                        std::span<const int> germ, int power,
                        std::span<const int> meas_fid) {
  std::vector<int> flat(prep_fid.begin(), prep_fid.end());
  if (!germ.empty() && power > 0) {
    const int reps = power / static_cast<int>(germ.size());
    for (int r = 0; r < reps; ++r)
      flat.insert(flat.end(), germ.begin(), germ.end());
  }
  flat.insert(flat.end(), meas_fid.begin(), meas_fid.end());
  return flat;
}

GstDesign standard_design(int l_max) {
  if (l_max < 1 || (l_max & (l_max - 1)) != 0)
    throw std::invalid_argument("l_max must be a power of two");

  GstDesign d;
  d.gate_labels = {"Gi", "Gx", "Gy"};
  d.gate_set = {gate_id(), gate_x90(), gate_y90()};

  constexpr int GI = 0, GX = 1, GY = 2;
  d.prep_fiducials = {{},   {GX},     {GY},
                      {GX, GX}, {GX, GX, GX}, {GY, GY, GY}};
  d.meas_fiducials = d.prep_fiducials;
  d.germs = {{GI},
             {GX},
             {GY},
             {GX, GY},
             {GX, GY, GI},
             {GX, GI, GY},
             {GX, GI, GI},
             {GY, GI, GI},
             {GX, GX, GI, GY},
             {GX, GY, GY, GI},
             {GX, GX, GY, GX, GY, GY}};
  for (int l = 1; l <= l_max; l *= 2) d.max_lengths.push_back(l);

  std::map<std::vector<int>, int> seen;
  auto push = [&](int prep, int germ, int power, int meas) {
    std::vector<int> flat =
        germ < 0 ? expand(d.prep_fiducials[prep], {}, 0, d.meas_fiducials[meas])
                 : expand(d.prep_fiducials[prep], d.germs[germ], power,
                          d.meas_fiducials[meas]);
    if (seen.contains(flat)) return;
    SequenceSpec s;
    s.id = static_cast<int>(d.sequences.size());
    s.prep_fid = prep;
    s.germ = germ;
    s.power = power;
    s.meas_fid = meas;
    s.flat = std::move(flat);
    seen.emplace(s.flat, s.id);
    d.sequences.push_back(std::move(s));
  };

  const int n_fid = static_cast<int>(d.prep_fiducials.size());
  for (int prep = 0; prep < n_fid; ++prep)
    for (int meas = 0; meas < n_fid; ++meas) push(prep, -1, 0, meas);
  for (int power : d.max_lengths)
    for (int germ = 0; germ < static_cast<int>(d.germs.size()); ++germ) {
      if (power < static_cast<int>(d.germs[germ].size())) continue;
      for (int prep = 0; prep < n_fid; ++prep)
        for (int meas = 0; meas < n_fid; ++meas) push(prep, germ, power, meas);
    }
  return d;
}

namespace {

json circuits_to_json(const std::vector<std::vector<int>>& cs) {
  json a = json::array();
  for (const auto& c : cs) a.push_back(c);
  return a;
}

std::vector<std::vector<int>> circuits_from_json(const json& a) {
  std::vector<std::vector<int>> cs;
  for (const auto& c : a) cs.push_back(c.get<std::vector<int>>());
  return cs;
}

}  // namespace

std::string design_to_json(const GstDesign& d) {
  json j;
  j["gate_labels"] = d.gate_labels;
  j["prep_fiducials"] = circuits_to_json(d.prep_fiducials);
  j["meas_fiducials"] = circuits_to_json(d.meas_fiducials);
  j["germs"] = circuits_to_json(d.germs);
  j["max_lengths"] = d.max_lengths;
  json seqs = json::array();
  for (const auto& s : d.sequences) {
    json labels = json::array();
    for (int slot : s.flat) labels.push_back(d.gate_labels[slot]);
    seqs.push_back({{"id", s.id},
                    {"prep_fid", s.prep_fid},
                    {"germ", s.germ},
                    {"power", s.power},
                    {"meas_fid", s.meas_fid},
                    {"flat", labels}});
  }
  j["sequences"] = std::move(seqs);
  return j.dump(1);
}

GstDesign design_from_json(const std::string& text) {
  const json j = json::parse(text);
  GstDesign d;
  d.gate_labels = j.at("gate_labels").get<std::vector<std::string>>();
  for (const auto& label : d.gate_labels)
    d.gate_set.push_back(clifford_from_label(label));
  d.prep_fiducials = circuits_from_json(j.at("prep_fiducials"));
  d.meas_fiducials = circuits_from_json(j.at("meas_fiducials"));
  d.germs = circuits_from_json(j.at("germs"));
  d.max_lengths = j.at("max_lengths").get<std::vector<int>>();
  std::map<std::string, int> slot_of;
  for (std::size_t k = 0; k < d.gate_labels.size(); ++k)
    slot_of[d.gate_labels[k]] = static_cast<int>(k);
  for (const auto& js : j.at("sequences")) {
    SequenceSpec s;
    s.id = js.at("id").get<int>();
    s.prep_fid = js.at("prep_fid").get<int>();
    s.germ = js.at("germ").get<int>();
    s.power = js.at("power").get<int>();
    s.meas_fid = js.at("meas_fid").get<int>();
    for (const auto& label : js.at("flat"))
      s.flat.push_back(slot_of.at(label.get<std::string>()));
    d.sequences.push_back(std::move(s));
  }
  return d;
}

void save_design(const GstDesign& d, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << design_to_json(d) << '\n';
}

GstDesign load_design(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return design_from_json(text);
}

std::string design_to_circuit_text(const GstDesign& d) {
  std::string out;
  for (const auto& s : d.sequences) {
    out += circuit_to_text(d.circuit_of(s));
    out += '\n';
  }
  return out;
}

}  // namespace pfrlab
