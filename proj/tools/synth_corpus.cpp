// Writes a synthetic bibliographic export shaped like a scholarly database
// download: three CSV batches over 2009-2018 with planted topic drift,
// correlated term pairs, publisher boilerplate and injected duplicates.
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ideaminer/csv.hpp"
#include "ideaminer/io.hpp"
#include "ideaminer/rng.hpp"

namespace {

namespace fs = std::filesystem;
using ideaminer::Rng;

struct Word {
  std::string text;
  double start;  // weight in the first year
  double end;    // weight in the last year
};

struct Theme {
  std::string name;
  std::vector<Word> words;
  std::vector<std::string> title_heads;
};

const std::vector<Theme>& themes() {
  static const std::vector<Theme> kThemes = {
      {"safety",
       {{"pedestrian", 0.02, 0.16},
        {"collision", 0.03, 0.14},
        {"accident", 0.03, 0.13},
        {"braking", 0.10, 0.08},
        {"warning", 0.10, 0.07},
        {"risk", 0.10, 0.08},
        {"driver", 0.16, 0.08},
        {"human", 0.12, 0.10},
        {"safety", 0.12, 0.12}},
       {"Pedestrian safety for", "Collision avoidance in", "Driver warning for", "Accident risk of"}},
      {"perception",
       {{"lidar", 0.03, 0.15},
        {"radar", 0.03, 0.13},
        {"camera", 0.14, 0.10},
        {"sensor", 0.14, 0.12},
        {"fusion", 0.08, 0.10},
        {"object", 0.12, 0.10},
        {"image", 0.14, 0.08},
        {"recognition", 0.12, 0.08}},
       {"Sensor fusion for", "Object recognition in", "Camera perception for", "Lidar mapping of"}},
      {"control",
       {{"steering", 0.14, 0.12},
        {"trajectory", 0.12, 0.12},
        {"planning", 0.10, 0.12},
        {"controller", 0.14, 0.10},
        {"speed", 0.12, 0.10},
        {"lane", 0.12, 0.10},
        {"fuel", 0.16, 0.03},
        {"engine", 0.12, 0.03}},
       {"Trajectory planning for", "Lane keeping control of", "Steering controller for", "Fuel efficient speed"}},
      {"infrastructure",
       {{"smart", 0.03, 0.16},
        {"city", 0.04, 0.12},
        {"traffic", 0.16, 0.12},
        {"communication", 0.12, 0.10},
        {"network", 0.14, 0.10},
        {"intersection", 0.12, 0.10},
        {"infrastructure", 0.12, 0.10},
        {"signal", 0.14, 0.06}},
       {"Smart city traffic for", "Vehicular network for", "Intersection management with",
        "Traffic signal communication for"}},
  };
  return kThemes;
}

const std::vector<std::string> kShared = {"self", "driving", "vehicle", "autonomous", "system"};
const std::vector<std::string> kGlue = {"the", "of", "and", "for", "with", "in", "a", "to", "is", "on"};
const std::vector<std::string> kVenues = {"Transportation Research Letters", "Intelligent Vehicles Symposium",
                                          "Journal of Field Robotics", "Sensors"};

double weight_at(const Word& w, double frac) { return w.start + (w.end - w.start) * frac; }

struct Record {
  std::string title, abstract, year, doi, source;
};

Record make_record(Rng& rng, int year, int first, int last, size_t serial) {
  const double frac = static_cast<double>(year - first) / static_cast<double>(last - first);
  const auto& all = themes();
  const size_t main_theme = rng.index(all.size());
  std::vector<double> mix(all.size(), 0.08);
  mix[main_theme] = 0.76;

  std::string abstract;
  const size_t length = 45 + rng.index(30);
  for (size_t i = 0; i < length; ++i) {
    std::string token;
    const double u = rng.uniform();
    if (u < 0.18) {
      token = kGlue[rng.index(kGlue.size())];
    } else if (u < 0.26) {
      // "self driving" stays adjacent so the phrase detector can find it.
      token = rng.uniform() < 0.5 ? "self driving" : kShared[2 + rng.index(kShared.size() - 2)];
    } else {
      const auto& theme = all[rng.discrete(mix)];
      std::vector<double> weights;
      for (const auto& w : theme.words) weights.push_back(weight_at(w, frac));
      token = theme.words[rng.discrete(weights)].text;
    }
    abstract += (i ? " " : "") + token;
  }
  if (rng.uniform() < 0.6) abstract += ". Copyright IEEE " + std::to_string(year) + ".";
  const auto& theme = all[main_theme];
  Record r;
  r.title = theme.title_heads[rng.index(theme.title_heads.size())] + " self-driving vehicles: study " +
            std::to_string(serial);
  r.abstract = abstract;
  r.year = std::to_string(year);
  r.doi = "10.5555/demo." + std::to_string(year) + "." + std::to_string(serial);
  r.source = kVenues[rng.index(kVenues.size())];
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic bibliographic corpus for the ideaminer demo"};
  std::string out = "data/demo";
  int per_year = 150;
  uint64_t seed = 2009;
  app.add_option("--out", out, "output directory");
  app.add_option("--docs-per-year", per_year, "records per year before duplicates")->check(CLI::Range(10, 100000));
  app.add_option("--seed", seed, "generator seed");
  CLI11_PARSE(app, argc, argv);

  constexpr int kFirst = 2009;
  constexpr int kLast = 2018;
  Rng rng(seed);
  const std::vector<std::pair<std::string, std::pair<int, int>>> batches = {
      {"scopus_2009_2012.csv", {2009, 2012}},
      {"scopus_2013_2015.csv", {2013, 2015}},
      {"scopus_2016_2018.csv", {2016, 2018}},
  };
  const ideaminer::csv::Row header = {"Authors", "Title", "Year", "Source title", "DOI", "Abstract"};
  size_t serial = 0;
  size_t written = 0;
  size_t duplicates = 0;
  fs::create_directories(out);
  for (const auto& [name, range] : batches) {
    std::string text = ideaminer::csv::format_row(header);
    for (int year = range.first; year <= range.second; ++year) {
      for (int i = 0; i < per_year; ++i) {
        Record r = make_record(rng, year, kFirst, kLast, ++serial);
        const std::string authors = "Author " + std::to_string(serial % 97) + "; Author " + std::to_string(serial % 89);
        text += ideaminer::csv::format_row({authors, r.title, r.year, r.source, r.doi, r.abstract});
        ++written;
        // Re-exports of the same article: the DOI in another spelling, or a
        // retyped title without a DOI.
        if (serial % 37 == 0) {
          text += ideaminer::csv::format_row(
              {authors, r.title, r.year, r.source, "https://doi.org/" + r.doi, r.abstract});
          ++written;
          ++duplicates;
        } else if (serial % 41 == 0) {
          std::string retyped = r.title;
          for (auto& c : retyped) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
          text += ideaminer::csv::format_row({authors, retyped + ".", r.year, r.source, "", r.abstract});
          ++written;
          ++duplicates;
        }
      }
    }
    ideaminer::io::write_file_atomic(fs::path(out) / name, text);
  }
  std::cerr << "wrote " << written << " rows (" << duplicates << " duplicates) to " << out << "\n";
  return 0;
}
