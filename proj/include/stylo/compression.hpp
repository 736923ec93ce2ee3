#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stylo/distance.hpp"
#include "stylo/matrix.hpp"

namespace stylo::compression {

/// A byte-level compressor. Implementations must be deterministic and safe
/// to call concurrently.
class Compressor {
 public:
  virtual ~Compressor() = default;
  virtual std::string id() const = 0;
  virtual int level() const = 0;
  virtual std::string compress(std::string_view input) const = 0;
  /// Inverse of compress(); `original_size` is the expected output length.
  virtual std::string decompress(std::string_view packed, std::size_t original_size) const;
  virtual std::size_t compressed_size(std::string_view input) const { return compress(input).size(); }
};

std::unique_ptr<Compressor> make_bzip2(int level = 9);
std::unique_ptr<Compressor> make_deflate(int level = 9);

/// Runs a user command with the text on stdin and takes the byte length of
/// its stdout as the compressed size.
struct ExternalConfig {
  std::string id = "external";
  std::string command;
  std::vector<std::string> args;
  double timeout_s = 60.0;
};

std::unique_ptr<Compressor> make_external(ExternalConfig config);

class Registry {
 public:
  /// bzip2 and deflate; external adapters are added explicitly.
  static Registry with_builtins();

  void add(std::unique_ptr<Compressor> c);
  const Compressor& get(const std::string& id) const;
  bool contains(const std::string& id) const { return items_.count(id) > 0; }
  std::vector<std::string> ids() const;

 private:
  std::map<std::string, std::unique_ptr<Compressor>> items_;
};

std::size_t compressed_size(std::string_view text, const Compressor& c);

/// (C(xy) - min(C(x), C(y))) / max(C(x), C(y)).
double ncd_from_sizes(std::size_t cx, std::size_t cy, std::size_t cxy);

/// Symmetrized: the smaller of the two concatenation orders.
double ncd(std::string_view x, std::string_view y, const Compressor& c);

enum class Mode { profile, instance };

const char* to_string(Mode m);

struct NcdStats {
  std::size_t single_compressions = 0;
  std::size_t pair_evaluations = 0;     // unordered pairs plus the n self pairs
  std::size_t concat_compressions = 0;  // two orders per evaluation
};

struct NcdMatrix {
  std::vector<std::string> ids;
  Matrix values;
  std::string compressor_id;
  Mode mode = Mode::instance;
  NcdStats stats;
};

struct Sample {
  std::string id;
  std::string text;
};

/// Full matrix including the diagonal NCD(x, x). With `cache` every C(x) is
/// computed once before the pair phase; without it each pair recompresses
/// its members (same results, more work).
NcdMatrix ncd_matrix(const std::vector<Sample>& samples, const Compressor& c, Mode mode, bool cache = true);

/// Copy with a zero diagonal, for clustering.
distance::DistanceMatrix as_distance(const NcdMatrix& m);
/// Average-linkage tree over the NCD matrix.
distance::Dendrogram ncd_tree(const NcdMatrix& m);

std::string to_csv(const NcdMatrix& m);
std::string to_json(const NcdMatrix& m);

}  // namespace stylo::compression
