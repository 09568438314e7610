#include "scaffold/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "scaffold/common.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint writer assumes a little-endian host");

namespace scaffold {

namespace {

constexpr char kMagic[4] = {'S', 'S', 'C', 'K'};

template <typename T>
void write_pod(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is, const char* what) {
  T v;
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw data_error(std::string("checkpoint truncated reading ") + what);
  return v;
}

std::ifstream open_and_check(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw data_error("cannot open checkpoint: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw data_error("not a checkpoint file: " + path);
  const auto version = read_pod<std::uint32_t>(is, "version");
  if (version != kCheckpointVersion)
    throw data_error("checkpoint version mismatch: file has " +
                     std::to_string(version) + ", expected " +
                     std::to_string(kCheckpointVersion));
  return is;
}

}  // namespace

void save_checkpoint(const std::string& path, const ParameterStore& store,
                     const std::string& meta) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw data_error("cannot write checkpoint: " + path);
  os.write(kMagic, 4);
  write_pod<std::uint32_t>(os, kCheckpointVersion);
  write_pod<std::uint64_t>(os, meta.size());
  os.write(meta.data(), static_cast<std::streamsize>(meta.size()));
  write_pod<std::uint64_t>(os, store.all().size());
  for (const auto& p : store.all()) {
    write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(p->name.size()));
    os.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
    write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(p->value.shape.size()));
    for (std::size_t d : p->value.shape) write_pod<std::uint64_t>(os, d);
    os.write(reinterpret_cast<const char*>(p->value.data.data()),
             static_cast<std::streamsize>(p->value.size() * sizeof(double)));
  }
  if (!os) throw data_error("write failed for checkpoint: " + path);
}

std::string read_checkpoint_meta(const std::string& path) {
  std::ifstream is = open_and_check(path);
  const auto len = read_pod<std::uint64_t>(is, "meta length");
  std::string meta(len, '\0');
  is.read(meta.data(), static_cast<std::streamsize>(len));
  if (!is) throw data_error("checkpoint truncated reading meta");
  return meta;
}

void load_checkpoint(const std::string& path, ParameterStore& store) {
  std::ifstream is = open_and_check(path);
  const auto meta_len = read_pod<std::uint64_t>(is, "meta length");
  is.seekg(static_cast<std::streamoff>(meta_len), std::ios::cur);
  const auto count = read_pod<std::uint64_t>(is, "parameter count");
  for (std::uint64_t e = 0; e < count; ++e) {
    const auto name_len = read_pod<std::uint32_t>(is, "name length");
    std::string name(name_len, '\0');
    is.read(name.data(), name_len);
    const auto rank = read_pod<std::uint32_t>(is, "rank");
    std::vector<std::size_t> shape(rank);
    for (auto& d : shape) d = read_pod<std::uint64_t>(is, "dim");
    Parameter* p = store.find(name);
    if (p == nullptr)
      throw data_error("checkpoint has unknown parameter: " + name);
    if (p->value.shape != shape)
      throw data_error("checkpoint shape mismatch for " + name);
    is.read(reinterpret_cast<char*>(p->value.data.data()),
            static_cast<std::streamsize>(p->value.size() * sizeof(double)));
    if (!is) throw data_error("checkpoint truncated reading " + name);
  }
}

}  // namespace scaffold
