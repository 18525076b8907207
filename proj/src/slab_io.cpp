#include "simplexlab/slab_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include <json.hpp>

#include "simplexlab/error.hpp"

namespace simplexlab {

namespace {

constexpr char kMagic[4] = {'S', 'L', 'A', 'B'};

template <class T>
void put(std::string& out, T v) {
  auto u = std::bit_cast<std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>>(v);
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((u >> (8 * i)) & 0xff));
}

class Reader {
 public:
  Reader(const std::string& b, std::size_t pos) : b_(b), pos_(pos) {}
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(b_[pos_++]);
  }
  template <class T>
  T get() {
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
    need(sizeof(T));
    U u = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) u |= static_cast<U>(static_cast<unsigned char>(b_[pos_ + i])) << (8 * i);
    pos_ += sizeof(T);
    return std::bit_cast<T>(u);
  }
  std::size_t remaining() const { return b_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (remaining() < n) throw IoError("SLAB: truncated input");
  }
  const std::string& b_;
  std::size_t pos_;
};

void put_header(std::string& out, SlabPayload payload, KernelTag tag, const Box& box) {
  out.append(kMagic, 4);
  out.push_back(static_cast<char>(kSlabVersion));
  out.push_back(static_cast<char>(payload));
  out.push_back(static_cast<char>(tag));
  out.push_back(0);
  put(out, static_cast<std::uint32_t>(box.dim()));
  for (Coord c : box.lower()) put(out, c);
  for (std::uint64_t e : box.extents()) put(out, e);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path);
  return s;
}

void spit(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

bool is_json_path(const std::string& path) {
  return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

KernelTag tag_from_name(const std::string& name) {
  for (auto t : {KernelTag::none, KernelTag::chi, KernelTag::psi, KernelTag::Psi, KernelTag::DeltaPsi})
    if (name == kernel_tag_name(t)) return t;
  throw IoError("unknown kernel tag '" + name + "'");
}

LatticeSet support(const GridFunction& f) {
  LatticeSet a(f.box());
  const auto v = f.values();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0.0) a.set_index(i, true);
  return a;
}

}  // namespace

std::string encode_slab(const GridFunction& f, KernelTag tag) {
  std::string out;
  put_header(out, SlabPayload::f64, tag, f.box());
  for (double v : f.values()) put(out, v);
  return out;
}

std::string encode_slab(const LatticeSet& a) {
  std::string out;
  put_header(out, SlabPayload::bits, KernelTag::none, a.box());
  for (std::uint64_t w : a.words()) put(out, w);
  return out;
}

SlabData decode_slab(const std::string& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) throw IoError("SLAB: bad magic");
  Reader in(bytes, 4);
  const std::uint8_t version = in.u8();
  if (version != kSlabVersion) throw IoError("SLAB: unsupported version " + std::to_string(version));
  const std::uint8_t payload = in.u8();
  const std::uint8_t tag = in.u8();
  in.u8();
  if (payload > 1) throw IoError("SLAB: unknown payload kind");
  if (tag > static_cast<std::uint8_t>(KernelTag::DeltaPsi)) throw IoError("SLAB: unknown kernel tag");
  const auto d = in.get<std::uint32_t>();
  if (d == 0 || d > 64) throw IoError("SLAB: dimension out of range");
  std::vector<Coord> lower(d);
  std::vector<std::uint64_t> extents(d);
  for (auto& c : lower) c = in.get<Coord>();
  unsigned __int128 volume = 1;
  for (auto& e : extents) {
    e = in.get<std::uint64_t>();
    volume *= e;
    if (volume > (static_cast<unsigned __int128>(1) << 40)) throw IoError("SLAB: box volume too large");
  }
  SlabData out;
  out.payload = static_cast<SlabPayload>(payload);
  out.tag = static_cast<KernelTag>(tag);
  Box box(lower, extents);
  if (out.payload == SlabPayload::f64) {
    if (in.remaining() != box.volume() * 8) throw IoError("SLAB: payload size does not match the box");
    out.function = GridFunction(box);
    for (auto& v : out.function.values()) v = in.get<double>();
  } else {
    out.set = LatticeSet(box);
    auto words = out.set.words();
    if (in.remaining() != words.size() * 8) throw IoError("SLAB: payload size does not match the box");
    for (auto& w : words) w = in.get<std::uint64_t>();
    if (const std::size_t tail = box.volume() % 64; tail && !words.empty() && (words.back() >> tail))
      throw IoError("SLAB: bits set past the box");
  }
  return out;
}

void write_slab(const std::string& path, const GridFunction& f, KernelTag tag) { spit(path, encode_slab(f, tag)); }
void write_slab(const std::string& path, const LatticeSet& a) { spit(path, encode_slab(a)); }
void write_kernel(const std::string& path, const Kernel& k) { spit(path, encode_slab(k.materialize(), k.tag)); }

SlabData read_slab(const std::string& path) {
  const std::string bytes = slurp(path);
  try {
    return decode_slab(bytes);
  } catch (const IoError& e) {
    throw IoError(path + ": " + e.what());
  }
}

SlabData parse_json_fixture(const std::string& text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
    const auto lower = j.at("lower").get<std::vector<Coord>>();
    const auto extents = j.at("extents").get<std::vector<std::uint64_t>>();
    if (lower.empty() || lower.size() != extents.size()) throw IoError("fixture: lower/extents mismatch");
    Box box(lower, extents);
    SlabData out;
    if (j.contains("tag")) out.tag = tag_from_name(j["tag"].get<std::string>());
    if (j.contains("values")) {
      auto values = j["values"].get<std::vector<double>>();
      if (values.size() != box.volume()) throw IoError("fixture: values length does not match the box");
      out.payload = SlabPayload::f64;
      out.function = GridFunction(box, std::move(values));
    } else if (j.contains("points")) {
      out.payload = SlabPayload::bits;
      out.set = LatticeSet(box);
      for (const auto& p : j["points"]) {
        const auto c = p.get<std::vector<Coord>>();
        if (c.size() != lower.size() || !box.contains(c)) throw IoError("fixture: point outside the box");
        out.set.insert(c);
      }
    } else {
      throw IoError("fixture: need \"values\" or \"points\"");
    }
    return out;
  } catch (const json::exception& e) {
    throw IoError(std::string("fixture: ") + e.what());
  } catch (const PreconditionError& e) {
    throw IoError(std::string("fixture: ") + e.what());
  }
}

namespace {

SlabData load(const std::string& path) {
  if (!is_json_path(path)) return read_slab(path);
  const std::string text = slurp(path);
  try {
    return parse_json_fixture(text);
  } catch (const IoError& e) {
    throw IoError(path + ": " + e.what());
  }
}

}  // namespace

GridFunction read_function(const std::string& path) {
  SlabData s = load(path);
  return s.payload == SlabPayload::f64 ? std::move(s.function) : s.set.indicator();
}

LatticeSet read_set(const std::string& path) {
  SlabData s = load(path);
  return s.payload == SlabPayload::bits ? std::move(s.set) : support(s.function);
}

}  // namespace simplexlab
