#pragma once

#include <iosfwd>
#include <string>

#include "dforest/forest.hpp"

namespace dforest {

enum class IndexIoStatus {
    bad_magic,
    unsupported_version,
    truncated,
    overlapping_vertex_sets,
    malformed,
};

class IndexIoError : public Error {
public:
    IndexIoError(IndexIoStatus status, const std::string& what)
        : Error(what), status_(status) {}
    IndexIoStatus status() const { return status_; }

private:
    IndexIoStatus status_;
};

// Binary index format, little-endian, versioned:
//   magic "DFOR", format version u32, n u64, m u64, kmax u32 (0xffffffff for
//   the empty-graph sentinel), label table (count u64 + length-prefixed UTF-8
//   tokens in vertex-id order), then per k-tree: node count u32, nodes in
//   preorder each as (core_num i32, parent preorder index i32 with -1 for the
//   root, vset count u32, sorted vertex-id u32 list).
// The vertex-node map is not serialized; it is rebuilt from the vsets on load.
inline constexpr std::uint32_t kIndexFormatVersion = 1;

// Requires canonical form (builders emit it; canonicalize() restores it).
void save_index(const DForest& f, std::ostream& out);
void save_index_file(const DForest& f, const std::string& path);

DForest load_index(std::istream& in);
DForest load_index_file(const std::string& path);

// Canonical byte image; equality of images is forest equality.
std::string index_bytes(const DForest& f);

}  // namespace dforest
