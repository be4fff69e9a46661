#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "bsen/volume.hpp"

namespace bsen {

enum class Label { HC = 0, MCI = 1, AD = 2 };
constexpr int kNumClasses = 3;

const char* label_name(Label l);
Label parse_label(const std::string& s);  // case-insensitive

struct SubjectRecord {
  std::string subject_id;
  Label label = Label::HC;
  double cdr = 0.0;
  int mmse = 30;
  std::string volume_path;
};

struct CohortDataset {
  std::vector<SubjectRecord> subjects;
  std::map<std::string, Volume4D> volumes;  // keyed by subject_id

  const SubjectRecord* find(const std::string& id) const;
  std::array<int, kNumClasses> class_counts() const;
};

// CSV with header exactly `subject_id,label,cdr,mmse,volume_path`.
CohortDataset load_manifest(const std::filesystem::path& path);

// Loads every subject's volume, resolving relative paths against base_dir.
void load_cohort_volumes(CohortDataset& dataset, const std::filesystem::path& base_dir);

}  // namespace bsen
