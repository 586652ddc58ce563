#include "dforest/index_io.hpp"

#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace dforest {

namespace {

void put_u32(std::ostream& out, std::uint32_t x) {
    char bytes[4];
    for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((x >> (8 * i)) & 0xff);
    out.write(bytes, 4);
}

void put_u64(std::ostream& out, std::uint64_t x) {
    char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((x >> (8 * i)) & 0xff);
    out.write(bytes, 8);
}

void put_i32(std::ostream& out, std::int32_t x) { put_u32(out, static_cast<std::uint32_t>(x)); }

std::uint32_t get_u32(std::istream& in) {
    char bytes[4];
    if (!in.read(bytes, 4)) throw IndexIoError(IndexIoStatus::truncated, "truncated index stream");
    std::uint32_t x = 0;
    for (int i = 0; i < 4; ++i)
        x |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[i])) << (8 * i);
    return x;
}

std::uint64_t get_u64(std::istream& in) {
    char bytes[8];
    if (!in.read(bytes, 8)) throw IndexIoError(IndexIoStatus::truncated, "truncated index stream");
    std::uint64_t x = 0;
    for (int i = 0; i < 8; ++i)
        x |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[i])) << (8 * i);
    return x;
}

std::int32_t get_i32(std::istream& in) { return static_cast<std::int32_t>(get_u32(in)); }

constexpr char kMagic[4] = {'D', 'F', 'O', 'R'};

}  // namespace

void save_index(const DForest& f, std::ostream& out) {
    out.write(kMagic, 4);
    put_u32(out, kIndexFormatVersion);
    put_u64(out, f.meta.n);
    put_u64(out, f.meta.m);
    put_u32(out, static_cast<std::uint32_t>(static_cast<std::int32_t>(f.meta.k_max)));
    put_u64(out, f.labels.size());
    for (const std::string& label : f.labels) {
        put_u32(out, static_cast<std::uint32_t>(label.size()));
        out.write(label.data(), static_cast<std::streamsize>(label.size()));
    }
    for (const KTree& tree : f.trees) {
        put_u32(out, static_cast<std::uint32_t>(tree.nodes.size()));
        for (const TreeNode& node : tree.nodes) {
            put_i32(out, node.core_num);
            put_i32(out, node.parent);
            put_u32(out, static_cast<std::uint32_t>(node.vset.size()));
            for (VertexId v : node.vset) put_u32(out, v);
        }
    }
    if (!out) throw IndexIoError(IndexIoStatus::truncated, "index write failed");
}

void save_index_file(const DForest& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    save_index(f, out);
}

DForest load_index(std::istream& in) {
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
        throw IndexIoError(IndexIoStatus::bad_magic, "not an index file");
    std::uint32_t version = get_u32(in);
    if (version != kIndexFormatVersion)
        throw IndexIoError(IndexIoStatus::unsupported_version,
                           "unsupported format version " + std::to_string(version));
    DForest f;
    f.meta.n = get_u64(in);
    f.meta.m = get_u64(in);
    f.meta.k_max = static_cast<std::int32_t>(get_u32(in));
    std::uint64_t label_count = get_u64(in);
    if (label_count != f.meta.n)
        throw IndexIoError(IndexIoStatus::malformed, "label count does not match n");
    // No upfront reservation: counts are untrusted until the stream backs
    // them, and each label consumes stream bytes before the vector grows.
    for (std::uint64_t i = 0; i < label_count; ++i) {
        std::uint32_t len = get_u32(in);
        if (len > (1u << 20))
            throw IndexIoError(IndexIoStatus::malformed, "label length out of range");
        std::string label(len, '\0');
        if (len > 0 && !in.read(label.data(), len))
            throw IndexIoError(IndexIoStatus::truncated, "truncated label table");
        f.labels.push_back(std::move(label));
    }
    f.rebuild_label_index();

    int tree_count = f.meta.k_max + 1;
    if (tree_count < 0) throw IndexIoError(IndexIoStatus::malformed, "negative tree count");
    for (int k = 0; k < tree_count; ++k) {
        KTree& tree = f.trees.emplace_back();
        tree.k = k;
        std::uint32_t node_count = get_u32(in);
        if (node_count == 0) throw IndexIoError(IndexIoStatus::malformed, "tree without root");
        // Non-root nodes own disjoint nonempty vertex sets, so n + 1 bounds them.
        if (node_count > f.meta.n + 1)
            throw IndexIoError(IndexIoStatus::malformed, "node count out of range");
        tree.nodes.resize(node_count);
        tree.vertex_node.assign(f.meta.n, -1);
        for (std::uint32_t id = 0; id < node_count; ++id) {
            TreeNode& node = tree.nodes[id];
            node.core_num = get_i32(in);
            node.parent = get_i32(in);
            if (id == 0) {
                if (node.core_num != -1 || node.parent != -1)
                    throw IndexIoError(IndexIoStatus::malformed, "bad root sentinel");
            } else {
                if (node.parent < 0 || static_cast<std::uint32_t>(node.parent) >= id)
                    throw IndexIoError(IndexIoStatus::malformed,
                                       "node parent is not an earlier preorder index");
                tree.nodes[static_cast<std::size_t>(node.parent)].children.push_back(
                    static_cast<std::int32_t>(id));
            }
            std::uint32_t vset_size = get_u32(in);
            if (id != 0 && vset_size == 0)
                throw IndexIoError(IndexIoStatus::malformed, "empty vertex set on a non-root node");
            if (vset_size > f.meta.n)
                throw IndexIoError(IndexIoStatus::malformed, "vertex set larger than n");
            node.vset.resize(vset_size);
            for (std::uint32_t i = 0; i < vset_size; ++i) {
                VertexId v = get_u32(in);
                if (v >= f.meta.n)
                    throw IndexIoError(IndexIoStatus::malformed, "vertex id out of range");
                node.vset[i] = v;
                if (tree.vertex_node[v] != -1)
                    throw IndexIoError(IndexIoStatus::overlapping_vertex_sets,
                                       "vertex appears in two vsets of one tree");
                tree.vertex_node[v] = static_cast<std::int32_t>(id);
            }
        }
    }
    in.peek();
    if (!in.eof())
        throw IndexIoError(IndexIoStatus::malformed, "trailing bytes after index payload");
    return f;
}

DForest load_index_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    return load_index(in);
}

std::string index_bytes(const DForest& f) {
    std::ostringstream out(std::ios::binary);
    save_index(f, out);
    return std::move(out).str();
}

}  // namespace dforest
