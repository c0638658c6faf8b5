// Binary index file. Layout is documented in docs/index_format.md; bump
// kFormatVersion on any change.

#include <array>
#include <cstring>
#include <fstream>
#include <sstream>

#include "rangereach/binary_io.hpp"
#include "rangereach/reach_index.hpp"

namespace rangereach {

namespace {

constexpr std::array<char, 8> kMagic = {'R', 'R', 'I', 'D', 'X', '2', 'D', '\0'};
constexpr std::uint32_t kFormatVersion = 1;
constexpr std::uint32_t kEndMarker = 0x21444e45;  // "END!"
constexpr std::uint64_t kMaxCount = std::numeric_limits<std::uint32_t>::max();

void write_csr(ByteWriter& out, const std::vector<std::vector<std::uint32_t>>& lists) {
    std::vector<std::uint32_t> offsets{0};
    std::vector<std::uint32_t> values;
    for (const auto& list : lists) {
        values.insert(values.end(), list.begin(), list.end());
        offsets.push_back(static_cast<std::uint32_t>(values.size()));
    }
    out.u32_array(offsets);
    out.u32_array(values);
}

std::vector<std::vector<std::uint32_t>> read_csr(ByteReader& in, std::size_t rows,
                                                 std::uint64_t value_bound) {
    auto offsets = in.u32_array(kMaxCount);
    auto values = in.u32_array(kMaxCount);
    if (offsets.size() != rows + 1 || offsets.front() != 0 || offsets.back() != values.size()) {
        throw FormatError("malformed adjacency table");
    }
    std::vector<std::vector<std::uint32_t>> lists(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        if (offsets[r] > offsets[r + 1]) throw FormatError("malformed adjacency table");
        lists[r].assign(values.begin() + offsets[r], values.begin() + offsets[r + 1]);
        for (auto v : lists[r]) {
            if (v >= value_bound) throw FormatError("adjacency value out of range");
        }
    }
    return lists;
}

void check_refs(const std::vector<TreeRef>& refs, std::size_t pool_size) {
    for (TreeRef t : refs) {
        if (t != kNoTree && t >= pool_size) throw FormatError("tree reference out of range");
    }
}

}  // namespace

void ReachIndex::serialize(std::ostream& os) const {
    ByteWriter out(os);
    out.bytes(kMagic.data(), kMagic.size());
    out.u32(kFormatVersion);
    out.u8(static_cast<std::uint8_t>(variant_));
    out.u8(0);
    out.u8(0);
    out.u8(0);
    out.u64(fanout_);
    out.u64(fingerprint_.vertex_count);
    out.u64(fingerprint_.edge_count);
    out.u64(fingerprint_.spatial_count);
    out.u64(fingerprint_.edge_hash);

    // condensation
    out.u8(static_cast<std::uint8_t>(cond_.mode));
    out.u64(cond_.comp_count);
    out.u32_array(cond_.comp_of);
    write_csr(out, cond_.dag_adjacency);
    out.u32_array(cond_.topo_order);
    write_csr(out, cond_.member_spatial);

    if (variant_ == Variant::Pointer) social_bits_.serialize(out);

    out.u64(pool_.size());
    for (const auto& tree : pool_) tree.serialize(out);

    // reference tables
    if (variant_ == Variant::Pointer) {
        out.u32_array(comp_tree_);
    } else {
        out.u32_array(vertex_tree_);
    }
    out.u32_array(shared_from_);
    std::uint64_t spatial = 0;
    for (const auto& p : coords_) spatial += p ? 1 : 0;
    out.u64(spatial);
    for (VertexId v = 0; v < coords_.size(); ++v) {
        if (!coords_[v]) continue;
        out.u32(v);
        out.f64(coords_[v]->x);
        out.f64(coords_[v]->y);
    }
    out.u64(union_work_);
    out.u32(kEndMarker);
    if (!out.ok()) throw Error("failed to write index");
}

ReachIndex ReachIndex::deserialize(std::istream& is) {
    ByteReader in(is);
    std::array<char, 8> magic{};
    in.bytes(magic.data(), magic.size());
    if (magic != kMagic) throw FormatError("not an index file (bad magic bytes)");
    const std::uint32_t version = in.u32();
    if (version != kFormatVersion) {
        throw FormatError("unsupported index format version " + std::to_string(version) +
                          " (expected " + std::to_string(kFormatVersion) + ")");
    }
    ReachIndex idx;
    const std::uint8_t tag = in.u8();
    if (tag > static_cast<std::uint8_t>(Variant::Pointer)) throw FormatError("unknown variant tag");
    idx.variant_ = static_cast<Variant>(tag);
    in.u8();
    in.u8();
    in.u8();
    idx.fanout_ = in.u64();
    if (idx.fanout_ < 2) throw FormatError("bad fanout");
    idx.fingerprint_.vertex_count = in.u64();
    idx.fingerprint_.edge_count = in.u64();
    idx.fingerprint_.spatial_count = in.u64();
    idx.fingerprint_.edge_hash = in.u64();
    const std::uint64_t n = idx.fingerprint_.vertex_count;
    if (n >= kMaxCount) throw FormatError("bad vertex count");

    Condensation& cond = idx.cond_;
    const std::uint8_t mode = in.u8();
    if (mode > static_cast<std::uint8_t>(CondenseMode::SocialOnly)) throw FormatError("bad mode");
    cond.mode = static_cast<CondenseMode>(mode);
    if (cond.mode != (idx.variant_ == Variant::Standard ? CondenseMode::Full : CondenseMode::SocialOnly)) {
        throw FormatError("condensation mode does not match variant");
    }
    cond.comp_count = in.u64();
    if (cond.comp_count > n) throw FormatError("bad component count");
    cond.comp_of = in.u32_array(kMaxCount);
    if (cond.comp_of.size() != n) throw FormatError("component map has the wrong length");
    for (ComponentId c : cond.comp_of) {
        if (c != kNoComponent && c >= cond.comp_count) throw FormatError("component id out of range");
    }
    cond.dag_adjacency = read_csr(in, cond.comp_count, cond.comp_count);
    cond.topo_order = in.u32_array(kMaxCount);
    cond.member_spatial = read_csr(in, cond.comp_count, n);
    try {
        if (topological_order(cond) != cond.topo_order) throw FormatError("stored topological order is stale");
    } catch (const FormatError&) {
        throw;
    } catch (const Error& e) {
        throw FormatError(e.what());
    }

    if (idx.variant_ == Variant::Pointer) {
        RankBitVector stored = RankBitVector::deserialize(in);
        if (stored.size() != n) throw FormatError("bit vector has the wrong length");
        for (VertexId v = 0; v < n; ++v) {
            if (stored.get(v) != (cond.comp_of[v] != kNoComponent)) {
                throw FormatError("bit vector disagrees with the component map");
            }
        }
    }

    const std::uint64_t pool_size = in.u64();
    if (pool_size > kMaxCount) throw FormatError("bad pool size");
    idx.pool_.reserve(pool_size);
    for (std::uint64_t i = 0; i < pool_size; ++i) idx.pool_.push_back(RTree2D::deserialize(in));

    if (idx.variant_ == Variant::Pointer) {
        idx.comp_tree_ = in.u32_array(kMaxCount);
        if (idx.comp_tree_.size() != cond.comp_count) throw FormatError("component table has the wrong length");
        check_refs(idx.comp_tree_, pool_size);
    } else {
        auto vertex_tree = in.u32_array(kMaxCount);
        if (vertex_tree.size() != n) throw FormatError("vertex table has the wrong length");
        check_refs(vertex_tree, pool_size);
        idx.comp_tree_.assign(cond.comp_count, kNoTree);
        for (VertexId v = 0; v < n; ++v) {
            if (cond.comp_of[v] != kNoComponent) idx.comp_tree_[cond.comp_of[v]] = vertex_tree[v];
        }
        for (VertexId v = 0; v < n; ++v) {
            const ComponentId c = cond.comp_of[v];
            if ((c == kNoComponent && vertex_tree[v] != kNoTree) ||
                (c != kNoComponent && idx.comp_tree_[c] != vertex_tree[v])) {
                throw FormatError("vertex table disagrees with the component map");
            }
        }
    }
    if (idx.variant_ == Variant::Standard) {
        for (TreeRef t : idx.comp_tree_) {
            if (t == kNoTree) throw FormatError("standard index component without a tree");
        }
        for (ComponentId c : cond.comp_of) {
            if (c == kNoComponent) throw FormatError("standard index vertex without a component");
        }
    }
    idx.shared_from_ = in.u32_array(kMaxCount);
    if (idx.shared_from_.size() != cond.comp_count) throw FormatError("sharing table has the wrong length");

    const std::uint64_t spatial = in.u64();
    if (spatial != idx.fingerprint_.spatial_count) throw FormatError("coordinate table size mismatch");
    idx.coords_.assign(n, std::nullopt);
    for (std::uint64_t i = 0; i < spatial; ++i) {
        const VertexId v = in.u32();
        const double x = in.f64();
        const double y = in.f64();
        if (v >= n || idx.coords_[v]) throw FormatError("bad coordinate record");
        idx.coords_[v] = Point2D{x, y};
    }
    for (VertexId v = 0; v < n; ++v) {
        if (cond.comp_of[v] == kNoComponent && !idx.coords_[v]) {
            throw FormatError("excluded vertex without a coordinate");
        }
    }
    idx.union_work_ = in.u64();
    if (in.u32() != kEndMarker) throw FormatError("missing end marker");

    idx.derive_lookup_tables();
    return idx;
}

void ReachIndex::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    serialize(out);
    out.flush();
    if (!out) throw Error("write error on " + path.string());
}

ReachIndex ReachIndex::load(const std::filesystem::path& path, const GeosocialGraph* graph) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    ReachIndex idx = deserialize(in);
    if (in.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes after the index");
    if (graph && graph->fingerprint() != idx.fingerprint()) {
        throw FingerprintMismatch("fingerprint mismatch: index " + path.string() + " was built from a different graph");
    }
    return idx;
}

}  // namespace rangereach
