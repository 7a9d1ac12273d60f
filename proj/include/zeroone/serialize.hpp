#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "zeroone/convex.hpp"
#include "zeroone/ensemble.hpp"
#include "zeroone/error.hpp"
#include "zeroone/mlp01.hpp"
#include "zeroone/zero_one.hpp"

namespace zeroone {

// Versioned binary container: 8-byte magic, u32 format version, u32 kind tag,
// u64 master seed, then a kind-specific payload. All integers and reals are
// little-endian; reals are IEEE 64-bit. Ensemble files hold a member count
// followed by the members' full containers back to back.

inline constexpr char kModelMagic[8] = {'Z', 'O', '0', '1', 'M', 'O', 'D', 'L'};
inline constexpr std::uint32_t kModelFormatVersion = 1;

enum class ModelKind : std::uint32_t {
    scd01 = 1,
    mlp01 = 2,
    hinge = 3,
    logistic_mlp = 4,
    ensemble_scd01 = 101,
    ensemble_mlp01 = 102,
    ensemble_hinge = 103,
    ensemble_logistic_mlp = 104,
};

inline std::string model_kind_name(ModelKind k) {
    switch (k) {
        case ModelKind::scd01: return "scd01";
        case ModelKind::mlp01: return "mlp01";
        case ModelKind::hinge: return "hinge";
        case ModelKind::logistic_mlp: return "lmlp";
        case ModelKind::ensemble_scd01: return "scd01-vote";
        case ModelKind::ensemble_mlp01: return "mlp01-vote";
        case ModelKind::ensemble_hinge: return "hinge-vote";
        case ModelKind::ensemble_logistic_mlp: return "lmlp-vote";
    }
    throw InternalError("unknown model kind tag");
}

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}
inline void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}
inline void put_f64(std::string& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(out, bits);
}
inline void put_f64s(std::string& out, const std::vector<double>& vs) {
    put_u64(out, vs.size());
    for (double v : vs) put_f64(out, v);
}

struct Cursor {
    const std::string* buf;
    std::size_t pos = 0;

    void need(std::size_t count) const {
        if (pos + count > buf->size()) throw DataError("corrupt model payload: truncated");
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= std::uint32_t(static_cast<unsigned char>((*buf)[pos + i])) << (8 * i);
        pos += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= std::uint64_t(static_cast<unsigned char>((*buf)[pos + i])) << (8 * i);
        pos += 8;
        return v;
    }
    double f64() {
        const std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
    std::vector<double> f64s() {
        const std::uint64_t count = u64();
        if (count > (buf->size() - pos) / 8)
            throw DataError("corrupt model payload: bad array length");
        std::vector<double> vs(count);
        for (auto& v : vs) v = f64();
        return vs;
    }
};

}  // namespace detail

struct ModelAny {
    ModelKind kind = ModelKind::scd01;
    std::uint64_t seed = 0;
    std::variant<LinearModel, Mlp01Model, HingeLinear, LogisticMlp,
                 VoteEnsemble<LinearModel>, VoteEnsemble<Mlp01Model>,
                 VoteEnsemble<HingeLinear>, VoteEnsemble<LogisticMlp>>
        value;
};

namespace detail {

inline void put_payload(std::string& out, const LinearModel& m) {
    put_f64s(out, m.w);
    put_f64(out, m.w0);
}
inline void put_payload(std::string& out, const Mlp01Model& m) {
    put_u64(out, m.d);
    put_u64(out, m.k);
    put_f64s(out, m.W);
    put_f64s(out, m.W0);
    put_f64s(out, m.w);
    put_f64(out, m.w0);
}
inline void put_payload(std::string& out, const HingeLinear& m) {
    put_f64s(out, m.w);
    put_f64(out, m.w0);
    put_f64(out, m.l2);
}
inline void put_payload(std::string& out, const LogisticMlp& m) {
    put_u32(out, m.multiclass ? 1 : 0);
    put_u64(out, m.sizes.size());
    for (std::size_t s : m.sizes) put_u64(out, s);
    for (std::size_t l = 0; l < m.layers(); ++l) {
        put_f64s(out, m.W[l]);
        put_f64s(out, m.b[l]);
    }
}

constexpr ModelKind kind_of(const LinearModel*) { return ModelKind::scd01; }
constexpr ModelKind kind_of(const Mlp01Model*) { return ModelKind::mlp01; }
constexpr ModelKind kind_of(const HingeLinear*) { return ModelKind::hinge; }
constexpr ModelKind kind_of(const LogisticMlp*) { return ModelKind::logistic_mlp; }
constexpr ModelKind ensemble_kind_of(const LinearModel*) {
    return ModelKind::ensemble_scd01;
}
constexpr ModelKind ensemble_kind_of(const Mlp01Model*) {
    return ModelKind::ensemble_mlp01;
}
constexpr ModelKind ensemble_kind_of(const HingeLinear*) {
    return ModelKind::ensemble_hinge;
}
constexpr ModelKind ensemble_kind_of(const LogisticMlp*) {
    return ModelKind::ensemble_logistic_mlp;
}

inline void put_header(std::string& out, ModelKind kind, std::uint64_t seed) {
    out.append(kModelMagic, 8);
    put_u32(out, kModelFormatVersion);
    put_u32(out, static_cast<std::uint32_t>(kind));
    put_u64(out, seed);
}

}  // namespace detail

template <typename Model>
std::string serialize_model(const Model& m, std::uint64_t seed) {
    std::string out;
    detail::put_header(out, detail::kind_of(&m), seed);
    detail::put_payload(out, m);
    return out;
}

template <typename Model>
std::string serialize_model(const VoteEnsemble<Model>& e, std::uint64_t seed) {
    std::string out;
    detail::put_header(out, detail::ensemble_kind_of(static_cast<Model*>(nullptr)), seed);
    detail::put_u64(out, e.members.size());
    for (const Model& m : e.members) out += serialize_model(m, seed);
    return out;
}

namespace detail {

inline ModelAny parse_model(Cursor& cur);

inline LinearModel parse_linear(Cursor& cur) {
    LinearModel m;
    m.w = cur.f64s();
    m.w0 = cur.f64();
    return m;
}
inline Mlp01Model parse_mlp01(Cursor& cur) {
    Mlp01Model m;
    m.d = cur.u64();
    m.k = cur.u64();
    m.W = cur.f64s();
    m.W0 = cur.f64s();
    m.w = cur.f64s();
    m.w0 = cur.f64();
    if (m.W.size() != m.d * m.k || m.W0.size() != m.k || m.w.size() != m.k)
        throw DataError("corrupt model payload: inconsistent dims");
    return m;
}
inline HingeLinear parse_hinge(Cursor& cur) {
    HingeLinear m;
    m.w = cur.f64s();
    m.w0 = cur.f64();
    m.l2 = cur.f64();
    return m;
}
inline LogisticMlp parse_lmlp(Cursor& cur) {
    LogisticMlp m;
    m.multiclass = cur.u32() != 0;
    const std::uint64_t count = cur.u64();
    if (count < 2 || count > 64) throw DataError("corrupt model payload: layer count");
    for (std::uint64_t i = 0; i < count; ++i) m.sizes.push_back(cur.u64());
    for (std::size_t l = 0; l + 1 < m.sizes.size(); ++l) {
        m.W.push_back(cur.f64s());
        m.b.push_back(cur.f64s());
        if (m.W[l].size() != m.sizes[l] * m.sizes[l + 1] ||
            m.b[l].size() != m.sizes[l + 1])
            throw DataError("corrupt model payload: inconsistent dims");
    }
    return m;
}

template <typename Model>
VoteEnsemble<Model> parse_ensemble(Cursor& cur, ModelKind member_kind) {
    const std::uint64_t count = cur.u64();
    if (count == 0) throw DataError("corrupt model payload: empty ensemble");
    VoteEnsemble<Model> e;
    for (std::uint64_t i = 0; i < count; ++i) {
        ModelAny member = parse_model(cur);
        if (member.kind != member_kind)
            throw DataError("corrupt model payload: mixed ensemble kinds");
        e.members.push_back(std::get<Model>(std::move(member.value)));
    }
    return e;
}

inline ModelAny parse_model(Cursor& cur) {
    cur.need(8);
    if (std::memcmp(cur.buf->data() + cur.pos, kModelMagic, 8) != 0)
        throw DataError("model file magic mismatch");
    cur.pos += 8;
    const std::uint32_t version = cur.u32();
    if (version != kModelFormatVersion)
        throw DataError("model file version mismatch: got " + std::to_string(version));
    const std::uint32_t tag = cur.u32();
    ModelAny out;
    out.seed = cur.u64();
    out.kind = static_cast<ModelKind>(tag);
    switch (out.kind) {
        case ModelKind::scd01: out.value = parse_linear(cur); return out;
        case ModelKind::mlp01: out.value = parse_mlp01(cur); return out;
        case ModelKind::hinge: out.value = parse_hinge(cur); return out;
        case ModelKind::logistic_mlp: out.value = parse_lmlp(cur); return out;
        case ModelKind::ensemble_scd01:
            out.value = parse_ensemble<LinearModel>(cur, ModelKind::scd01);
            return out;
        case ModelKind::ensemble_mlp01:
            out.value = parse_ensemble<Mlp01Model>(cur, ModelKind::mlp01);
            return out;
        case ModelKind::ensemble_hinge:
            out.value = parse_ensemble<HingeLinear>(cur, ModelKind::hinge);
            return out;
        case ModelKind::ensemble_logistic_mlp:
            out.value = parse_ensemble<LogisticMlp>(cur, ModelKind::logistic_mlp);
            return out;
    }
    throw DataError("unknown model kind tag: " + std::to_string(tag));
}

}  // namespace detail

inline ModelAny deserialize_model(const std::string& bytes) {
    detail::Cursor cur{&bytes, 0};
    ModelAny m = detail::parse_model(cur);
    if (cur.pos != bytes.size())
        throw DataError("corrupt model payload: trailing bytes");
    return m;
}

template <typename Model>
void save_model(const std::string& path, const Model& m, std::uint64_t seed) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write model file: " + path);
    const std::string bytes = serialize_model(m, seed);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("write failed: " + path);
}

inline ModelAny load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return deserialize_model(ss.str());
}

inline Predictor predictor(const ModelAny& m) {
    return std::visit([](const auto& v) { return predictor(v); }, m.value);
}

inline std::size_t model_dim(const ModelAny& m) {
    return std::visit(
        [](const auto& v) -> std::size_t {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, LinearModel>) return v.w.size();
            else if constexpr (std::is_same_v<T, Mlp01Model>) return v.d;
            else if constexpr (std::is_same_v<T, HingeLinear>) return v.w.size();
            else if constexpr (std::is_same_v<T, LogisticMlp>) return v.in_dim();
            else if constexpr (std::is_same_v<T, VoteEnsemble<LinearModel>>)
                return v.members.front().w.size();
            else if constexpr (std::is_same_v<T, VoteEnsemble<Mlp01Model>>)
                return v.members.front().d;
            else if constexpr (std::is_same_v<T, VoteEnsemble<HingeLinear>>)
                return v.members.front().w.size();
            else
                return v.members.front().in_dim();
        },
        m.value);
}

// Native white-box adversary for a loaded model: linear sign attack for the
// linear kinds, FGSM for logistic MLPs, the flip-one-node scan for MLP01.
// Ensembles are attacked through member 0.
inline Adversary adversary_any(const ModelAny& m, const AttackConfig& cfg,
                               std::uint64_t attack_seed) {
    return std::visit(
        [&cfg, attack_seed](const auto& v) -> Adversary {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Mlp01Model> ||
                          std::is_same_v<T, VoteEnsemble<Mlp01Model>>)
                return adversary(v, cfg, attack_seed);
            else
                return adversary(v, cfg);
        },
        m.value);
}

}  // namespace zeroone
