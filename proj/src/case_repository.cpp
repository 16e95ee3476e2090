#include "mcbr24/case_repository.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "mcbr24/card_codec.hpp"
#include "mcbr24/errors.hpp"
#include "mcbr24/features.hpp"

namespace mcbr {

using nlohmann::json;

Case Case::unsolved(const Puzzle& puzzle, std::string image_path) {
  return Case{puzzle.id(), puzzle, std::move(image_path), {}, {}};
}

bool Case::solved() const {
  return !solutions.empty() && results.size() == solutions.size() &&
         std::all_of(results.begin(), results.end(), [](Verdict v) { return v == Verdict::kCorrect; });
}

IndexEntry make_index_entry(const Puzzle& puzzle, const LatentModel* model) {
  IndexEntry e;
  e.features = extract_features(puzzle).values();
  if (model) e.latent = model->latent(model_input(puzzle));
  return e;
}

const Case* Repository::find(std::string_view id) const {
  const auto pos = position_of(id);
  return pos ? &cases_[*pos] : nullptr;
}

std::optional<std::size_t> Repository::position_of(std::string_view id) const {
  for (std::size_t i = 0; i < cases_.size(); ++i) {
    if (cases_[i].id == id) return i;
  }
  return std::nullopt;
}

bool Repository::has_latent_index() const {
  return index_ && !index_->empty() && !index_->front().latent.empty();
}

const std::vector<IndexEntry>& Repository::index() const {
  if (!index_) throw IndexMissing("repository has no retrieval index attached");
  return *index_;
}

void Repository::build_index(const LatentModel* model) {
  std::vector<IndexEntry> entries;
  entries.reserve(cases_.size());
  for (const Case& c : cases_) entries.push_back(make_index_entry(c.puzzle, model));
  index_ = std::move(entries);
}

void Repository::attach_index(std::vector<IndexEntry> entries) {
  if (entries.size() != cases_.size()) {
    throw std::invalid_argument("index has " + std::to_string(entries.size()) + " entries for " +
                                std::to_string(cases_.size()) + " cases");
  }
  index_ = std::move(entries);
}

void Repository::append(Case c, std::optional<IndexEntry> entry) {
  if (position_of(c.id)) throw DuplicateId("case id already in repository: " + c.id);
  if (index_.has_value() != entry.has_value() && !(cases_.empty() && entry)) {
    throw std::invalid_argument("index entry must be given exactly when the repository is indexed");
  }
  if (entry) {
    if (!index_) index_.emplace();
    index_->push_back(std::move(*entry));
  }
  cases_.push_back(std::move(c));
}

Repository build_math24_repository(const BuildOptions& options) {
  Repository repo;
  for (const Puzzle& p : enumerate_puzzles()) {
    auto solutions = solve_restricted(p);
    if (solutions.empty()) continue;
    const std::string text = recognize(render(p));
    if (Puzzle::parse(text) != p) {
      throw RecognitionMismatch("card for " + p.text() + " was recognized as " + text);
    }
    Case c = Case::unsolved(p, options.image_dir + "/" + p.id() + ".pgm");
    for (const Solution& s : solutions) c.results.push_back(validate_answer(p, s.expression));
    c.solutions = std::move(solutions);
    repo.append(std::move(c));
  }
  return repo;
}

void write_case_images(const Repository& repo, const std::filesystem::path& base_dir) {
  for (const Case& c : repo.cases()) {
    if (c.image_path.empty()) continue;
    const auto path = base_dir / c.image_path;
    std::filesystem::create_directories(path.parent_path());
    write_pgm(render(c.puzzle), path);
  }
}

Repository retain(const Repository& repo, Case c, const LatentModel* model) {
  if (!c.solved()) throw UnsolvedCase("case " + c.id + " has no verified solution; only solved cases are retained");
  if (repo.find(c.id)) throw DuplicateId("case id already in repository: " + c.id);
  std::optional<IndexEntry> entry;
  if (repo.has_index()) {
    if (repo.has_latent_index() && !model) throw IndexMissing("a latent model is needed to index the retained case");
    entry = make_index_entry(c.puzzle, repo.has_latent_index() ? model : nullptr);
  }
  Repository next = repo;
  next.append(std::move(c), std::move(entry));
  return next;
}

// ---------------------------------------------------------------------------
// JSON Lines persistence

namespace {

json to_json(const Case& c, const IndexEntry* entry) {
  json sols = json::array();
  for (const Solution& s : c.solutions) {
    sols.push_back({{"category", s.category.name()},
                    {"large_positions", {s.large_positions[0], s.large_positions[1]}},
                    {"expression", s.expression}});
  }
  json results = json::array();
  for (Verdict v : c.results) results.push_back(std::string(to_string(v)));
  json j = {{"id", c.id},
            {"puzzle_text", c.puzzle.text()},
            {"image_path", c.image_path},
            {"solutions", std::move(sols)},
            {"results", std::move(results)}};
  if (entry) {
    json idx = {{"features", entry->features}};
    if (!entry->latent.empty()) idx["latent"] = entry->latent;
    j["index"] = std::move(idx);
  }
  return j;
}

std::pair<Case, std::optional<IndexEntry>> from_json(const json& j) {
  Puzzle puzzle = Puzzle::parse(j.at("puzzle_text").get<std::string>());
  Case c{j.at("id").get<std::string>(), puzzle, j.at("image_path").get<std::string>(), {}, {}};
  for (const json& s : j.at("solutions")) {
    const auto cat = parse_category(s.at("category").get<std::string>());
    if (!cat) throw std::invalid_argument("unknown solution category " + s.at("category").dump());
    const auto pos = s.at("large_positions").get<std::vector<int>>();
    if (pos.size() != 2 || pos[0] < 1 || pos[1] > 4 || pos[0] >= pos[1]) {
      throw std::invalid_argument("large_positions must be two ascending positions in [1,4]");
    }
    c.solutions.push_back({*cat, {pos[0], pos[1]}, s.at("expression").get<std::string>()});
  }
  for (const json& r : j.at("results")) {
    const auto v = parse_verdict(r.get<std::string>());
    if (!v) throw std::invalid_argument("unknown result " + r.dump());
    c.results.push_back(*v);
  }
  if (c.results.size() != c.solutions.size()) throw std::invalid_argument("one result is needed per solution");

  std::optional<IndexEntry> entry;
  if (j.contains("index")) {
    const json& idx = j.at("index");
    entry.emplace();
    entry->features = idx.at("features").get<std::vector<double>>();
    if (entry->features.size() != FeatureVector::kSize) throw std::invalid_argument("index features need 40 values");
    if (idx.contains("latent")) {
      entry->latent = idx.at("latent").get<std::vector<double>>();
      if (entry->latent.size() != LatentModel::kHidden) throw std::invalid_argument("index latent needs 64 values");
    }
  }
  return {std::move(c), std::move(entry)};
}

}  // namespace

void save(const Repository& repo, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write repository " + path.string());
  const auto& cases = repo.cases();
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const IndexEntry* entry = repo.has_index() ? &repo.index()[i] : nullptr;
    f << to_json(cases[i], entry).dump() << '\n';
  }
  if (!f) throw Error("failed writing repository " + path.string());
}

Repository load(const std::filesystem::path& path, bool check_images) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open repository " + path.string());
  Repository repo;
  // (indexed, has latent) of the first record; every record must match it.
  std::optional<std::pair<bool, bool>> shape;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::optional<std::pair<Case, std::optional<IndexEntry>>> record;
    try {
      record = from_json(json::parse(line));
    } catch (const json::exception& e) {
      throw MalformedRecord(line_no, e.what());
    } catch (const InvalidPuzzle& e) {
      throw MalformedRecord(line_no, e.what());
    } catch (const std::invalid_argument& e) {
      throw MalformedRecord(line_no, e.what());
    }
    auto& [c, entry] = *record;
    const std::pair<bool, bool> this_shape{entry.has_value(), entry && !entry->latent.empty()};
    if (!shape) shape = this_shape;
    if (*shape != this_shape) throw MalformedRecord(line_no, "index columns differ from earlier records");
    if (check_images && !c.image_path.empty() && !std::filesystem::exists(path.parent_path() / c.image_path)) {
      throw MissingImageFile("line " + std::to_string(line_no) +
                             ": image not found: " + (path.parent_path() / c.image_path).string());
    }
    try {
      repo.append(std::move(c), std::move(entry));
    } catch (const DuplicateId& e) {
      throw MalformedRecord(line_no, e.what());
    }
  }
  return repo;
}

}  // namespace mcbr
