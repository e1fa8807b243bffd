#include "ostrovsky/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <json.hpp>

#include "io.hpp"
#include "ostrovsky/error.hpp"

namespace ostrovsky {

namespace {

constexpr char kMagic[8] = {'O', 'S', 'T', 'R', 'T', 'R', 'J', '1'};
constexpr std::size_t kHeaderBytes = 8 + 4 + 4 + 8 + 4 + 8 + 8 + 8 + 8;

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

template <class T>
void put(std::string& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

class Reader {
 public:
  Reader(const std::string& data, const std::string& name) : data_(data), name_(name) {}

  template <class T>
  T get() {
    if (pos_ + sizeof(T) > data_.size()) throw IoError(name_ + ": truncated checkpoint");
    T value;
    std::memcpy(&value, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }
  std::size_t position() const { return pos_; }

 private:
  const std::string& data_;
  std::string name_;
  std::size_t pos_ = 0;
};

std::filesystem::path sidecar(const std::filesystem::path& path) {
  auto p = path;
  p += ".json";
  return p;
}

}  // namespace

void write_checkpoint(const std::filesystem::path& path, const Trajectory& traj, double s) {
  validate_trajectory(traj);
  const auto& grid = *traj.grid;
  const std::uint32_t n = static_cast<std::uint32_t>(grid.size());
  const std::int32_t sign = traj.sign == Sign::plus ? 1 : -1;
  std::string out;
  out.reserve(kHeaderBytes + traj.size() * (8 + 16 * n));
  out.append(kMagic, 8);
  put(out, checkpoint_version);
  put(out, n);
  put(out, grid.half_length());
  put(out, sign);
  put(out, s);
  put(out, traj.dt);
  put(out, traj.final_time());
  put(out, static_cast<std::uint64_t>(traj.size()));
  for (std::size_t m = 0; m < traj.size(); ++m) {
    put(out, traj.times[m]);
    for (const auto& c : traj.states[m].spectral()) {
      put(out, c.real());
      put(out, c.imag());
    }
  }

  nlohmann::ordered_json meta;
  meta["format"] = "OSTRTRJ1";
  meta["version"] = checkpoint_version;
  meta["byte_order"] = "little";
  meta["n_points"] = n;
  meta["L"] = grid.half_length();
  meta["sign"] = to_string(traj.sign);
  meta["s"] = s;
  meta["dt"] = traj.dt;
  meta["T"] = traj.final_time();
  meta["slices"] = traj.size();
  meta["header_bytes"] = kHeaderBytes;
  meta["slice_bytes"] = 8 + 16 * static_cast<std::uint64_t>(n);
  meta["slice_layout"] = {"t:f64", "coefficients:complex128[n_points]"};
  meta["coefficient_order"] = "fft";

  detail::write_file_atomic(path, out);
  detail::write_file_atomic(sidecar(path), meta.dump(2) + "\n");
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  const std::string data = detail::read_file(path);
  const std::string name = path.string();
  if (data.size() < kHeaderBytes || std::memcmp(data.data(), kMagic, 8) != 0) {
    throw IoError(name + ": not a trajectory checkpoint");
  }
  Reader r(data, name);
  for (int i = 0; i < 8; ++i) r.get<char>();
  const auto version = r.get<std::uint32_t>();
  if (version != checkpoint_version) throw IoError(name + ": unsupported checkpoint version");
  const auto n = r.get<std::uint32_t>();
  const auto L = r.get<double>();
  const auto sign = r.get<std::int32_t>();
  const auto s = r.get<double>();
  const auto dt = r.get<double>();
  r.get<double>();  // T, implied by dt and the slice count
  const auto slices = r.get<std::uint64_t>();
  if (sign != 1 && sign != -1) throw IoError(name + ": invalid sign field");
  if (slices == 0 || data.size() != kHeaderBytes + slices * (8 + 16 * static_cast<std::uint64_t>(n))) {
    throw IoError(name + ": size does not match the header");
  }
  GridPtr grid;
  try {
    grid = make_grid(static_cast<int>(n), L);
  } catch (const Error& e) {
    throw IoError(name + ": invalid grid in header (" + e.what() + ")");
  }
  std::vector<SpectralField> states;
  states.reserve(slices);
  for (std::uint64_t m = 0; m < slices; ++m) {
    r.get<double>();
    std::vector<cplx> c(n);
    for (auto& v : c) {
      const double re = r.get<double>();
      const double im = r.get<double>();
      v = cplx(re, im);
    }
    states.push_back(SpectralField::from_spectral(grid, std::move(c)));
  }
  try {
    return {make_trajectory(grid, sign == 1 ? Sign::plus : Sign::minus, dt, std::move(states)), s};
  } catch (const Error& e) {
    throw IoError(name + ": " + e.what());
  }
}

}  // namespace ostrovsky
