#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcbr24/latent_model.hpp"
#include "mcbr24/math24.hpp"
#include "mcbr24/puzzle.hpp"

namespace mcbr {

// A (problem, solutions, results) tuple. The problem is the card image plus
// the puzzle recognized from it. A new case has no solutions or results yet.
struct Case {
  std::string id;
  Puzzle puzzle;
  std::string image_path;  // relative to the repository file's directory
  std::vector<Solution> solutions;
  std::vector<Verdict> results;

  static Case unsolved(const Puzzle& puzzle, std::string image_path = {});

  bool solved() const;

  friend bool operator==(const Case&, const Case&) = default;
};

// Per-case retrieval vectors. `latent` is empty when the index was built
// without a latent model.
struct IndexEntry {
  std::vector<double> features;
  LatentVector latent;

  friend bool operator==(const IndexEntry&, const IndexEntry&) = default;
};

IndexEntry make_index_entry(const Puzzle& puzzle, const LatentModel* model);

class Repository {
 public:
  const std::vector<Case>& cases() const { return cases_; }
  std::size_t size() const { return cases_.size(); }
  bool empty() const { return cases_.empty(); }

  const Case* find(std::string_view id) const;
  std::optional<std::size_t> position_of(std::string_view id) const;

  bool has_index() const { return index_.has_value(); }
  bool has_latent_index() const;
  // Throws IndexMissing when no index is attached.
  const std::vector<IndexEntry>& index() const;

  // Computes features for every case, and latents when `model` is given.
  void build_index(const LatentModel* model);
  // Throws std::invalid_argument unless there is one entry per case.
  void attach_index(std::vector<IndexEntry> entries);
  void detach_index() { index_.reset(); }

  // Appends without the retain preconditions; used by builders and loaders.
  // Throws DuplicateId.
  void append(Case c, std::optional<IndexEntry> entry = std::nullopt);

  friend bool operator==(const Repository&, const Repository&) = default;

 private:
  std::vector<Case> cases_;
  std::optional<std::vector<IndexEntry>> index_;
};

struct BuildOptions {
  // Directory, relative to the repository file, that holds the card images.
  std::string image_dir = "images";
};

// Every puzzle with a restricted-family solution, each rendered to a card,
// recognized back and solved. Throws RecognitionMismatch if the codec does
// not reproduce a puzzle.
Repository build_math24_repository(const BuildOptions& options = {});

// Renders each case's card into `base_dir / image_path`.
void write_case_images(const Repository& repo, const std::filesystem::path& base_dir);

// Adds a solved case and returns the new repository state. Throws
// DuplicateId, UnsolvedCase, or IndexMissing when a latent index is
// attached but no model is given.
Repository retain(const Repository& repo, Case c, const LatentModel* model = nullptr);

// JSON Lines, one case per line. See docs/formats.md.
void save(const Repository& repo, const std::filesystem::path& path);
// Throws MalformedRecord (with the 1-based line) or MissingImageFile when
// `check_images` is set and a referenced image does not exist.
Repository load(const std::filesystem::path& path, bool check_images = true);

}  // namespace mcbr
