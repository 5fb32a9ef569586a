// Copyright 2026 The ethcg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ethcg/bytes.hpp"
#include "ethcg/errors.hpp"
#include "ethcg/trace_model.hpp"

namespace ethcg {

enum class FieldKind : uint8_t {
    Balance,
    Nonce,
    Code,
    Storage,
    WholeAccount,
};

inline std::string to_string(FieldKind k) {
    switch (k) {
        case FieldKind::Balance: return "balance";
        case FieldKind::Nonce: return "nonce";
        case FieldKind::Code: return "code";
        case FieldKind::Storage: return "storage";
        case FieldKind::WholeAccount: return "account";
    }
    return "account";
}

struct StateField {
    FieldKind kind = FieldKind::WholeAccount;
    Bytes32 slot{};  // meaningful only for Storage

    auto operator<=>(const StateField&) const = default;

    static StateField balance() { return {FieldKind::Balance, {}}; }
    static StateField nonce() { return {FieldKind::Nonce, {}}; }
    static StateField code() { return {FieldKind::Code, {}}; }
    static StateField storage(const Bytes32& slot) { return {FieldKind::Storage, slot}; }
    static StateField whole_account() { return {FieldKind::WholeAccount, {}}; }
};

// One unit of blockchain state, ordered by address bytes, field tag, slot.
struct StateKey {
    Address address{};
    StateField field{};

    auto operator<=>(const StateKey&) const = default;

    std::string to_string() const {
        std::string s = address.to_hex() + "/" + ethcg::to_string(field.kind);
        if (field.kind == FieldKind::Storage) s += "/" + field.slot.to_hex();
        return s;
    }
};

enum class RwMethod : uint8_t { Prestate, CallTracer };

inline std::string to_string(RwMethod m) {
    return m == RwMethod::Prestate ? "prestate" : "calltracer";
}

enum class Granularity : uint8_t { Field, AddressLevel };

struct AccessSets {
    uint32_t tx_index = 0;
    std::set<StateKey> reads;
    std::set<StateKey> writes;
    RwMethod method = RwMethod::Prestate;
    Granularity granularity = Granularity::Field;

    bool operator==(const AccessSets&) const = default;
};

namespace detail {

inline void expand_account_fields(const Address& addr, const PrestateAccount& acct,
                                  std::set<StateKey>& out) {
    if (acct.balance) out.insert({addr, StateField::balance()});
    if (acct.nonce) out.insert({addr, StateField::nonce()});
    if (acct.code) out.insert({addr, StateField::code()});
    if (acct.storage) {
        for (const auto& [slot, value] : *acct.storage) {
            out.insert({addr, StateField::storage(slot)});
        }
    }
}

inline std::set<StateKey> expand_fields(const AccountMap& accounts) {
    std::set<StateKey> keys;
    for (const auto& [addr, acct] : accounts) expand_account_fields(addr, acct, keys);
    return keys;
}

}  // namespace detail

// Field-granularity sets by the prestate method: writes are every field the
// diff output touches (union of the pre and post sides); reads are the
// accessed fields minus the writes.
inline AccessSets rwsets_from_prestate(uint32_t tx_index, const TxPrestate& tx) {
    if (!tx.has_accessed() || !tx.has_diff()) {
        throw MissingDataError(
            "prestate read/write sets need both diffMode=false and diffMode=true traces; "
            "fetch both modes for tx " + std::to_string(tx_index));
    }
    AccessSets sets;
    sets.tx_index = tx_index;
    sets.method = RwMethod::Prestate;
    sets.granularity = Granularity::Field;
    sets.writes = detail::expand_fields(tx.pre());
    for (StateKey key : detail::expand_fields(tx.post())) sets.writes.insert(key);
    for (StateKey key : detail::expand_fields(*tx.accessed)) {
        if (!sets.writes.contains(key)) sets.reads.insert(key);
    }
    return sets;
}

namespace detail {

struct CallPermissions {
    bool read_from = false, read_to = false;
    bool write_from = false, write_to = false;
    bool enters_static = false;
};

// Per-call-type permission table; STATICCALL additionally marks its whole
// subtree read-only.
inline CallPermissions permissions_for(CallType t) {
    switch (t) {
        case CallType::Call:
            return {true, true, true, true, false};
        case CallType::StaticCall:
            return {true, true, false, false, true};
        case CallType::DelegateCall:
        case CallType::CallCode:
            return {true, true, true, false, false};
        case CallType::Create:
        case CallType::Create2:
            return {true, false, true, true, false};
        case CallType::SelfDestruct:
            return {true, false, true, true, false};
    }
    return {};
}

inline void collect_call_accesses(const CallFrame& frame, bool static_context,
                                  std::set<StateKey>& reads, std::set<StateKey>& writes) {
    CallPermissions perms = permissions_for(frame.call_type);
    if (perms.read_from) reads.insert({frame.from, StateField::whole_account()});
    if (perms.read_to) reads.insert({frame.to, StateField::whole_account()});
    if (!static_context) {
        if (perms.write_from) writes.insert({frame.from, StateField::whole_account()});
        if (perms.write_to) writes.insert({frame.to, StateField::whole_account()});
    }
    bool child_static = static_context || perms.enters_static;
    for (const CallFrame& sub : frame.calls) {
        collect_call_accesses(sub, child_static, reads, writes);
    }
}

}  // namespace detail

// Address-granularity sets by the call-tracer method: every call that may
// write to an address is counted as writing to it, and a STATICCALL context
// cascades read-only down its whole subtree.
inline AccessSets rwsets_from_calltrace(uint32_t tx_index, const CallFrame& root) {
    AccessSets sets;
    sets.tx_index = tx_index;
    sets.method = RwMethod::CallTracer;
    sets.granularity = Granularity::AddressLevel;
    detail::collect_call_accesses(root, false, sets.reads, sets.writes);
    return sets;
}

// Collapses every key to (address, WholeAccount); a written address is
// removed from the reads so the sets stay disjoint.
inline AccessSets project_to_address(const AccessSets& sets) {
    AccessSets out;
    out.tx_index = sets.tx_index;
    out.method = sets.method;
    out.granularity = Granularity::AddressLevel;
    for (const StateKey& key : sets.writes) {
        out.writes.insert({key.address, StateField::whole_account()});
    }
    for (const StateKey& key : sets.reads) {
        StateKey collapsed{key.address, StateField::whole_account()};
        if (!out.writes.contains(collapsed)) out.reads.insert(collapsed);
    }
    return out;
}

enum class Cause : uint8_t { Balance, Nonce, Storage, Code };

inline constexpr Cause kAllCauses[] = {Cause::Balance, Cause::Nonce, Cause::Storage, Cause::Code};

inline std::string to_string(Cause c) {
    switch (c) {
        case Cause::Balance: return "balance";
        case Cause::Nonce: return "nonce";
        case Cause::Storage: return "storage";
        case Cause::Code: return "code";
    }
    return "balance";
}

inline Cause cause_of_field(const StateField& field) {
    switch (field.kind) {
        case FieldKind::Balance: return Cause::Balance;
        case FieldKind::Nonce: return Cause::Nonce;
        case FieldKind::Storage: return Cause::Storage;
        case FieldKind::Code: return Cause::Code;
        case FieldKind::WholeAccount: break;
    }
    throw GranularityError("cause attribution requires field-granularity keys");
}

// Multiset of (address, cause) for every field both transactions write.
// Distinct storage slots do not collide; one pair may contribute several
// causes at the same address.
inline std::map<std::pair<Address, Cause>, uint64_t> conflict_causes(const AccessSets& a,
                                                                     const AccessSets& b) {
    if (a.granularity != Granularity::Field || b.granularity != Granularity::Field) {
        throw GranularityError("cause attribution requires field-granularity access sets");
    }
    std::map<std::pair<Address, Cause>, uint64_t> causes;
    for (const StateKey& key : a.writes) {
        if (b.writes.contains(key)) {
            ++causes[{key.address, cause_of_field(key.field)}];
        }
    }
    return causes;
}

// --- JSON interchange for synthetic workloads and tooling ---

inline json to_json(const StateKey& key) { return key.to_string(); }

inline StateKey state_key_from_string(std::string_view s) {
    // Longest legal key: address + "/storage/" + 32-byte slot.
    if (s.size() > 128) throw ParseError("state key too long");
    std::vector<std::string> parts{""};
    for (char c : s) {
        if (c == '/') {
            parts.emplace_back();
        } else {
            parts.back().push_back(c);
        }
    }
    StateKey key;
    key.address = Address::from_hex(parts[0]);
    const std::string& kind = parts.size() > 1 ? parts[1] : "account";
    if (kind == "balance") {
        key.field = StateField::balance();
    } else if (kind == "nonce") {
        key.field = StateField::nonce();
    } else if (kind == "code") {
        key.field = StateField::code();
    } else if (kind == "account") {
        key.field = StateField::whole_account();
    } else if (kind == "storage") {
        if (parts.size() < 3 || parts[2].empty()) throw ParseError("storage key missing slot");
        key.field = StateField::storage(Bytes32::from_hex(parts[2]));
    } else {
        throw ParseError("unknown state field kind '" + kind + "'");
    }
    return key;
}

inline json to_json(const AccessSets& sets) {
    json reads = json::array();
    for (const StateKey& key : sets.reads) reads.push_back(key.to_string());
    json writes = json::array();
    for (const StateKey& key : sets.writes) writes.push_back(key.to_string());
    return json{{"tx_index", sets.tx_index},
                {"method", to_string(sets.method)},
                {"granularity", sets.granularity == Granularity::Field ? "field" : "address"},
                {"reads", std::move(reads)},
                {"writes", std::move(writes)}};
}

inline AccessSets access_sets_from_json(const json& j) {
    AccessSets sets;
    sets.tx_index = j.at("tx_index").get<uint32_t>();
    sets.method = j.at("method").get<std::string>() == "calltracer" ? RwMethod::CallTracer
                                                                    : RwMethod::Prestate;
    sets.granularity = j.at("granularity").get<std::string>() == "field" ? Granularity::Field
                                                                         : Granularity::AddressLevel;
    for (const json& key : j.at("reads")) {
        sets.reads.insert(state_key_from_string(key.get_ref<const std::string&>()));
    }
    for (const json& key : j.at("writes")) {
        sets.writes.insert(state_key_from_string(key.get_ref<const std::string&>()));
    }
    return sets;
}

}  // namespace ethcg
