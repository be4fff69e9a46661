#include "bsen/manifest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "bsen/error.hpp"
#include "bsen/volume_format.hpp"

namespace bsen {

const char* label_name(Label l) {
  switch (l) {
    case Label::HC: return "HC";
    case Label::MCI: return "MCI";
    case Label::AD: return "AD";
  }
  return "?";
}

Label parse_label(const std::string& s) {
  std::string u;
  for (char c : s) u.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (u == "HC") return Label::HC;
  if (u == "MCI") return Label::MCI;
  if (u == "AD") return Label::AD;
  throw DataError("unknown label '" + s + "' (expected HC, MCI or AD)");
}

const SubjectRecord* CohortDataset::find(const std::string& id) const {
  for (const auto& s : subjects)
    if (s.subject_id == id) return &s;
  return nullptr;
}

std::array<int, kNumClasses> CohortDataset::class_counts() const {
  std::array<int, kNumClasses> c{0, 0, 0};
  for (const auto& s : subjects) c[static_cast<int>(s.label)]++;
  return c;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

CohortDataset load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty manifest " + path.string());
  if (strip_cr(line) != "subject_id,label,cdr,mmse,volume_path")
    throw DataError("manifest header must be exactly "
                    "'subject_id,label,cdr,mmse,volume_path' in " + path.string());

  CohortDataset ds;
  std::set<std::string> seen;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto at_row = " at row " + std::to_string(row) + " of " + path.string();
    const auto fields = split_csv_line(line);
    if (fields.size() != 5)
      throw DataError("expected 5 columns, found " + std::to_string(fields.size()) + at_row);
    SubjectRecord rec;
    rec.subject_id = fields[0];
    if (rec.subject_id.empty()) throw DataError("empty subject_id" + at_row);
    if (!seen.insert(rec.subject_id).second)
      throw DataError("duplicate subject_id '" + rec.subject_id + "'" + at_row);
    try {
      rec.label = parse_label(fields[1]);
    } catch (const DataError& e) {
      throw DataError(std::string(e.what()) + at_row);
    }
    try {
      std::size_t pos = 0;
      rec.cdr = std::stod(fields[2], &pos);
      if (pos != fields[2].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw DataError("unparseable cdr '" + fields[2] + "'" + at_row);
    }
    if (rec.cdr < 0) throw DataError("cdr out of range (must be >= 0)" + at_row);
    try {
      std::size_t pos = 0;
      rec.mmse = std::stoi(fields[3], &pos);
      if (pos != fields[3].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw DataError("unparseable mmse '" + fields[3] + "'" + at_row);
    }
    if (rec.mmse < 0 || rec.mmse > 30) throw DataError("mmse out of range [0,30]" + at_row);
    rec.volume_path = fields[4];
    ds.subjects.push_back(std::move(rec));
  }
  return ds;
}

void load_cohort_volumes(CohortDataset& dataset, const std::filesystem::path& base_dir) {
  for (const auto& s : dataset.subjects) {
    std::filesystem::path p = s.volume_path;
    if (p.is_relative()) p = base_dir / p;
    AnyVolume v = load_volume(p);
    if (auto* v4 = std::get_if<Volume4D>(&v)) {
      dataset.volumes[s.subject_id] = std::move(*v4);
    } else {
      // Promote a single 3-D volume to a one-frame scan.
      auto& v3 = std::get<Volume3D>(v);
      Volume4D v4;
      v4.dims = v3.dims;
      v4.voxel_size_mm = v3.voxel_size_mm;
      v4.nt = 1;
      v4.data = std::move(v3.data);
      dataset.volumes[s.subject_id] = std::move(v4);
    }
  }
}

}  // namespace bsen
