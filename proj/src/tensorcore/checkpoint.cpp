//
// graph2graph - Copyright 2026 The graph2graph Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "g2g/tensorcore/checkpoint.h"

#include <cstdint>
#include <cstring>
#include <map>
#include <set>

#include "g2g/errors.h"
#include "g2g/text_io.h"

namespace g2g {
namespace {

constexpr char kMagic[] = "VJTNN1";
constexpr std::size_t kMagicSize = 6;

struct Entry {
  std::string name;
  std::vector<std::uint32_t> dims;
  const Mat *data = nullptr;
  double scalar = 0;
};

template<typename T>
void put(std::string &out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i)
    out.push_back(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i))
                                    & 0xff));
}

void put_float(std::string &out, double v) {
  float f = static_cast<float>(v);
  std::uint32_t bits;
  std::memcpy(&bits, &f, sizeof bits);
  put<std::uint32_t>(out, bits);
}

class Reader {
public:
  explicit Reader(const std::string &bytes) : bytes_(bytes) { }

  template<typename T>
  T get() {
    need(sizeof(T));
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(
               bytes_[pos_ + i]))
           << (8 * i);
    pos_ += sizeof(T);
    return static_cast<T>(v);
  }

  std::string get_string(std::size_t n) {
    need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  std::size_t pos() const { return pos_; }

private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size())
      throw DataError("checkpoint truncated");
  }

  const std::string &bytes_;
  std::size_t pos_ = 0;
};

float float_at(const std::string &bytes, std::size_t at) {
  std::uint32_t bits = 0;
  for (int i = 0; i < 4; ++i)
    bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[at + i]))
            << (8 * i);
  float f;
  std::memcpy(&f, &bits, sizeof f);
  return f;
}

struct Header {
  std::string metadata;
  struct Item {
    std::vector<std::uint32_t> dims;
    std::uint64_t offset;
  };
  std::map<std::string, Item> items;
  std::size_t data_start = 0;
};

Header read_header(const std::string &bytes) {
  Reader r(bytes);
  if (r.get_string(kMagicSize) != kMagic)
    throw DataError("not a checkpoint (bad magic)");
  Header h;
  h.metadata = r.get_string(r.get<std::uint32_t>());
  std::uint32_t count = r.get<std::uint32_t>();
  for (std::uint32_t k = 0; k < count; ++k) {
    std::string name = r.get_string(r.get<std::uint16_t>());
    Header::Item item;
    std::uint32_t rank = r.get<std::uint32_t>();
    if (rank > 8)
      throw DataError("checkpoint entry " + name + " has rank "
                      + std::to_string(rank));
    for (std::uint32_t d = 0; d < rank; ++d)
      item.dims.push_back(r.get<std::uint32_t>());
    item.offset = r.get<std::uint64_t>();
    if (!h.items.emplace(name, item).second)
      throw DataError("duplicate checkpoint entry " + name);
  }
  h.data_start = r.pos();
  for (const auto &[name, item]: h.items) {
    std::uint64_t n = 1;
    for (auto d: item.dims)
      n *= d;
    if (h.data_start + item.offset + 4 * n > bytes.size())
      throw DataError("checkpoint entry " + name + " runs past end of file");
  }
  return h;
}

std::string step_name(const ParamStore &store) {
  return "@adam_step:" + store.label();
}

}  // namespace

std::string encode_checkpoint(std::span<const ParamStore *const> stores,
                              const std::string &metadata) {
  std::vector<Entry> entries;
  std::set<std::string> seen;
  for (const ParamStore *store: stores) {
    for (const Parameter *p: store->parameters()) {
      if (!seen.insert(p->name).second)
        throw std::invalid_argument("parameter name repeated across stores: "
                                    + p->name);
      std::vector<std::uint32_t> dims = {
        static_cast<std::uint32_t>(p->value.rows()),
        static_cast<std::uint32_t>(p->value.cols()) };
      entries.push_back({ p->name, dims, &p->value });
      entries.push_back({ p->name + "@adam_m", dims, &p->m });
      entries.push_back({ p->name + "@adam_v", dims, &p->v });
    }
    Entry step{ step_name(*store), { 1 }, nullptr,
                static_cast<double>(store->step()) };
    if (!seen.insert(step.name).second)
      throw std::invalid_argument("store label repeated: " + store->label());
    entries.push_back(step);
  }

  std::string out(kMagic, kMagicSize);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(metadata.size()));
  out += metadata;
  put<std::uint32_t>(out, static_cast<std::uint32_t>(entries.size()));
  std::uint64_t offset = 0;
  for (const Entry &e: entries) {
    put<std::uint16_t>(out, static_cast<std::uint16_t>(e.name.size()));
    out += e.name;
    put<std::uint32_t>(out, static_cast<std::uint32_t>(e.dims.size()));
    std::uint64_t n = 1;
    for (auto d: e.dims) {
      put<std::uint32_t>(out, d);
      n *= d;
    }
    put<std::uint64_t>(out, offset);
    offset += 4 * n;
  }
  for (const Entry &e: entries) {
    if (e.data == nullptr) {
      put_float(out, e.scalar);
      continue;
    }
    for (Eigen::Index i = 0; i < e.data->size(); ++i)
      put_float(out, e.data->data()[i]);
  }
  return out;
}

std::string checkpoint_metadata(const std::string &bytes) {
  return read_header(bytes).metadata;
}

std::string decode_checkpoint(const std::string &bytes,
                              std::span<ParamStore *const> stores,
                              bool allow_extra) {
  Header h = read_header(bytes);
  std::size_t expected = 0;
  auto load = [&](const std::string &name, Mat &target) {
    auto it = h.items.find(name);
    if (it == h.items.end())
      throw DataError("checkpoint lacks entry " + name);
    const auto &dims = it->second.dims;
    if (dims.size() != 2 || dims[0] != target.rows()
        || dims[1] != target.cols())
      throw DataError("checkpoint entry " + name + " has the wrong shape");
    std::size_t at = h.data_start + it->second.offset;
    for (Eigen::Index i = 0; i < target.size(); ++i)
      target.data()[i] = float_at(bytes, at + 4 * i);
    ++expected;
  };
  for (ParamStore *store: stores) {
    for (Parameter *p: store->parameters()) {
      load(p->name, p->value);
      load(p->name + "@adam_m", p->m);
      load(p->name + "@adam_v", p->v);
    }
    auto it = h.items.find(step_name(*store));
    if (it == h.items.end() || it->second.dims != std::vector<std::uint32_t>{ 1 })
      throw DataError("checkpoint lacks entry " + step_name(*store));
    store->set_step(static_cast<long>(
        float_at(bytes, h.data_start + it->second.offset)));
    ++expected;
  }
  if (!allow_extra && expected != h.items.size())
    throw DataError("checkpoint has entries the model does not define");
  return h.metadata;
}

void save_checkpoint(const std::filesystem::path &path,
                     std::span<const ParamStore *const> stores,
                     const std::string &metadata) {
  write_file_atomic(path, encode_checkpoint(stores, metadata));
}

std::string load_checkpoint(const std::filesystem::path &path,
                            std::span<ParamStore *const> stores,
                            bool allow_extra) {
  return decode_checkpoint(read_file(path), stores, allow_extra);
}

}  // namespace g2g
