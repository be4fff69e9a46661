#pragma once

#include <map>
#include <string>
#include <vector>

#include "bsen/atlas.hpp"
#include "bsen/features.hpp"
#include "bsen/manifest.hpp"
#include "bsen/model.hpp"
#include "bsen/stats.hpp"

namespace bsen {

struct RoiStats {
  int region_id = 0;
  std::string name;
  int n_a = 0, n_b = 0;          // group sizes (a = HC, b = AD)
  double mean_a = 0, sd_a = 0;
  double mean_b = 0, sd_b = 0;
  double t = 0;
  double p_raw = 1;
  double p_holm = 1;
  double p_bonferroni = 1;
};

// Full encoder->decoder pass in inference mode on a prepared subject volume.
Volume3D reconstruct_subject(BsenModel& model, const Volume3D& prepared);

// Mean voxel value per region; regions with no voxels are skipped with a
// warning, background (label 0) never contributes.
std::map<int, double> roi_mean_activation(const Volume3D& vol, const Atlas& atlas);

// Per-region pooled-variance t-tests between two groups of per-subject
// region means, with Holm and Bonferroni corrections filled in.
std::vector<RoiStats> compare_groups(const std::vector<std::map<int, double>>& group_a,
                                     const std::vector<std::map<int, double>>& group_b,
                                     const Atlas& atlas);

struct DiscriminativeReport {
  double alpha = 0.05;
  FweMethod correction = FweMethod::None;  // significance basis for the sections
  std::map<Extractor, std::vector<RoiStats>> stats;  // ordered by region id
  // Region ids per section, mirroring the four report blocks:
  std::vector<int> cae_and_bsen;
  std::vector<int> bsen_only;   // significant under both behavior tests, not CAE
  std::vector<int> cdr_only;
  std::vector<int> mmse_only;
};

// HC vs AD comparison of decoder reconstructions for each extractor
// (CAE, BSEN_CDR, BSEN_MMSE given as trained models).
DiscriminativeReport discriminative_report(
    std::map<Extractor, BsenModel*> models,
    const std::vector<std::pair<Label, const Volume3D*>>& prepared_subjects,
    const Atlas& atlas, double alpha, FweMethod correction);

std::string report_markdown(const DiscriminativeReport& report, const Atlas& atlas);
std::string report_tsv(const DiscriminativeReport& report);

}  // namespace bsen
