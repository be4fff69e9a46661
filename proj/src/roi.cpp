#include "bsen/roi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>

#include "bsen/error.hpp"

namespace bsen {

Volume3D reconstruct_subject(BsenModel& model, const Volume3D& prepared) {
  const Dims3 in = model.cfg.input_dims;
  if (!(prepared.dims == in))
    throw DataError("reconstruct_subject: volume is " + to_string(prepared.dims) +
                    " but the checkpoint expects " + to_string(in));
  nn::Tensor5<float> x(1, 1, in.nx, in.ny, in.nz);
  std::copy(prepared.data.begin(), prepared.data.end(), x.data.begin());
  const auto& out = model.forward(x, false);
  Volume3D rec = make_volume(in, prepared.voxel_size_mm);
  std::copy(out.data.begin(), out.data.end(), rec.data.begin());
  return rec;
}

std::map<int, double> roi_mean_activation(const Volume3D& vol, const Atlas& atlas) {
  if (!(vol.dims == atlas.dims))
    throw DataError("roi_mean_activation: volume " + to_string(vol.dims) +
                    " does not match atlas " + to_string(atlas.dims));
  std::map<int, double> sums;
  std::map<int, std::int64_t> counts;
  for (std::size_t i = 0; i < atlas.labels.size(); ++i) {
    const int id = atlas.labels[i];
    if (id <= 0) continue;
    sums[id] += vol.data[i];
    counts[id]++;
  }
  std::map<int, double> means;
  for (auto& [id, s] : sums) means[id] = s / static_cast<double>(counts[id]);
  for (const auto& [id, name] : atlas.names)
    if (id > 0 && !means.count(id))
      std::cerr << "[roi] warning: region " << id << " (" << name
                << ") has no voxels in the atlas volume; skipped\n";
  return means;
}

std::vector<RoiStats> compare_groups(const std::vector<std::map<int, double>>& group_a,
                                     const std::vector<std::map<int, double>>& group_b,
                                     const Atlas& atlas) {
  if (group_a.size() < 2 || group_b.size() < 2)
    throw DataError("compare_groups: each group needs at least 2 subjects");
  std::vector<RoiStats> rows;
  std::vector<double> pvals;
  for (int id : atlas.region_ids()) {
    std::vector<double> a, b;
    for (const auto& m : group_a)
      if (auto it = m.find(id); it != m.end()) a.push_back(it->second);
    for (const auto& m : group_b)
      if (auto it = m.find(id); it != m.end()) b.push_back(it->second);
    if (a.size() < 2 || b.size() < 2) continue;
    RoiStats r;
    r.region_id = id;
    r.name = atlas.names.at(id);
    r.n_a = static_cast<int>(a.size());
    r.n_b = static_cast<int>(b.size());
    auto moments = [](const std::vector<double>& v, double& mean, double& sd) {
      mean = 0;
      for (double x : v) mean += x;
      mean /= static_cast<double>(v.size());
      double ss = 0;
      for (double x : v) ss += (x - mean) * (x - mean);
      sd = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
    };
    moments(a, r.mean_a, r.sd_a);
    moments(b, r.mean_b, r.sd_b);
    const TTestResult t = two_sided_t_test(a, b);
    r.t = t.t;
    r.p_raw = t.p;
    rows.push_back(r);
    pvals.push_back(t.p);
  }
  const auto holm = fwe_correct(pvals, FweMethod::Holm);
  const auto bonf = fwe_correct(pvals, FweMethod::Bonferroni);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].p_holm = holm[i];
    rows[i].p_bonferroni = bonf[i];
  }
  return rows;
}

namespace {

double selected_p(const RoiStats& r, FweMethod m) {
  switch (m) {
    case FweMethod::None: return r.p_raw;
    case FweMethod::Holm: return r.p_holm;
    case FweMethod::Bonferroni: return r.p_bonferroni;
  }
  return r.p_raw;
}

std::set<int> significant_ids(const std::vector<RoiStats>& rows, double alpha, FweMethod m) {
  std::set<int> ids;
  for (const auto& r : rows)
    if (selected_p(r, m) < alpha) ids.insert(r.region_id);
  return ids;
}

}  // namespace

DiscriminativeReport discriminative_report(
    std::map<Extractor, BsenModel*> models,
    const std::vector<std::pair<Label, const Volume3D*>>& prepared_subjects,
    const Atlas& atlas, double alpha, FweMethod correction) {
  DiscriminativeReport rep;
  rep.alpha = alpha;
  rep.correction = correction;

  for (auto& [ex, model] : models) {
    std::vector<std::map<int, double>> hc, ad;
    for (const auto& [label, vol] : prepared_subjects) {
      if (label == Label::MCI) continue;  // the comparison is HC vs AD
      const Volume3D rec = reconstruct_subject(*model, *vol);
      auto means = roi_mean_activation(rec, atlas);
      (label == Label::HC ? hc : ad).push_back(std::move(means));
    }
    rep.stats[ex] = compare_groups(hc, ad, atlas);
  }

  auto sig = [&](Extractor e) {
    auto it = rep.stats.find(e);
    return it == rep.stats.end() ? std::set<int>{}
                                 : significant_ids(it->second, alpha, correction);
  };
  const std::set<int> s_cae = sig(Extractor::CAE);
  const std::set<int> s_cdr = sig(Extractor::BSEN_CDR);
  const std::set<int> s_mmse = sig(Extractor::BSEN_MMSE);

  for (int id : s_cae)
    if (s_cdr.count(id) || s_mmse.count(id)) rep.cae_and_bsen.push_back(id);
  for (int id : s_cdr)
    if (s_mmse.count(id) && !s_cae.count(id)) rep.bsen_only.push_back(id);
  for (int id : s_cdr)
    if (!s_mmse.count(id) && !s_cae.count(id)) rep.cdr_only.push_back(id);
  for (int id : s_mmse)
    if (!s_cdr.count(id) && !s_cae.count(id)) rep.mmse_only.push_back(id);
  return rep;
}

namespace {

std::string fmt_t_p(double t, double p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f / %.3f", t, p);
  return buf;
}

const RoiStats* find_row(const std::vector<RoiStats>& rows, int id) {
  for (const auto& r : rows)
    if (r.region_id == id) return &r;
  return nullptr;
}

void write_section(std::ostringstream& md, const DiscriminativeReport& rep,
                   const std::string& title, const std::vector<int>& ids,
                   const std::vector<Extractor>& cols) {
  md << "## " << title << "\n\n";
  if (ids.empty()) {
    md << "(none)\n\n";
    return;
  }
  md << "| ROI |";
  for (Extractor e : cols) md << " " << extractor_name(e) << " (t / p) |";
  md << "\n|---|";
  for (std::size_t i = 0; i < cols.size(); ++i) md << "---|";
  md << "\n";
  for (int id : ids) {
    std::string name = "region " + std::to_string(id);
    for (Extractor e : cols) {
      if (auto it = rep.stats.find(e); it != rep.stats.end())
        if (const RoiStats* r = find_row(it->second, id)) name = r->name;
    }
    md << "| " << name << " |";
    for (Extractor e : cols) {
      const RoiStats* r = nullptr;
      if (auto it = rep.stats.find(e); it != rep.stats.end()) r = find_row(it->second, id);
      md << " " << (r ? fmt_t_p(r->t, r->p_raw) : "X") << " |";
    }
    md << "\n";
  }
  md << "\n";
}

}  // namespace

std::string report_markdown(const DiscriminativeReport& rep, const Atlas&) {
  std::ostringstream md;
  md << "# Discriminative ROI report (HC vs AD)\n\n";
  md << "Significance basis: " << (rep.correction == FweMethod::None ? "raw" : fwe_name(rep.correction))
     << " p < " << rep.alpha << "; raw p shown in tables, corrected values in the TSV.\n\n";
  write_section(md, rep, "ROIs found in CAE and BSEN", rep.cae_and_bsen,
                {Extractor::CAE, Extractor::BSEN_CDR, Extractor::BSEN_MMSE});
  write_section(md, rep, "ROIs found in BSEN only", rep.bsen_only,
                {Extractor::BSEN_CDR, Extractor::BSEN_MMSE});
  write_section(md, rep, "ROIs found in BSEN_CDR only", rep.cdr_only, {Extractor::BSEN_CDR});
  write_section(md, rep, "ROIs found in BSEN_MMSE only", rep.mmse_only, {Extractor::BSEN_MMSE});
  return md.str();
}

std::string report_tsv(const DiscriminativeReport& rep) {
  std::ostringstream out;
  out << "extractor\tregion_id\tname\tn_hc\tmean_hc\tsd_hc\tn_ad\tmean_ad\tsd_ad\tt\tp_raw\tp_holm\tp_bonferroni\n";
  char buf[256];
  for (const auto& [ex, rows] : rep.stats)
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf,
                    "%s\t%d\t%s\t%d\t%.6g\t%.6g\t%d\t%.6g\t%.6g\t%.6g\t%.6g\t%.6g\t%.6g\n",
                    extractor_name(ex), r.region_id, r.name.c_str(), r.n_a, r.mean_a, r.sd_a,
                    r.n_b, r.mean_b, r.sd_b, r.t, r.p_raw, r.p_holm, r.p_bonferroni);
      out << buf;
    }
  return out.str();
}

}  // namespace bsen
