// Copyright 2026 The ethcg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ethcg/bytes.hpp"
#include "ethcg/errors.hpp"

namespace ethcg {

using json = nlohmann::json;

// EVM call-stack bound; anything deeper is a malformed document.
inline constexpr int kMaxCallDepth = 1024;

enum class CallType : uint8_t {
    Call,
    StaticCall,
    DelegateCall,
    CallCode,
    Create,
    Create2,
    SelfDestruct,
};

inline CallType call_type_from_string(std::string_view s) {
    if (s == "CALL") return CallType::Call;
    if (s == "STATICCALL") return CallType::StaticCall;
    if (s == "DELEGATECALL") return CallType::DelegateCall;
    if (s == "CALLCODE") return CallType::CallCode;
    if (s == "CREATE") return CallType::Create;
    if (s == "CREATE2") return CallType::Create2;
    if (s == "SELFDESTRUCT") return CallType::SelfDestruct;
    throw UnknownCallTypeError("unknown call type '" + std::string(s) + "'");
}

inline std::string to_string(CallType t) {
    switch (t) {
        case CallType::Call: return "CALL";
        case CallType::StaticCall: return "STATICCALL";
        case CallType::DelegateCall: return "DELEGATECALL";
        case CallType::CallCode: return "CALLCODE";
        case CallType::Create: return "CREATE";
        case CallType::Create2: return "CREATE2";
        case CallType::SelfDestruct: return "SELFDESTRUCT";
    }
    return "CALL";
}

// One node of a transaction's call tree, as reported by the call tracer.
struct CallFrame {
    CallType call_type = CallType::Call;
    Address from{};
    Address to{};
    // Set when the document had no `to` (failed CREATE) and `to` holds a
    // synthetic placeholder derived from (from, frame path).
    bool to_synthetic = false;
    u256 value{};
    uint64_t gas = 0;
    uint64_t gas_used = 0;
    std::vector<uint8_t> input;
    std::optional<std::vector<uint8_t>> output;
    std::optional<std::string> error;
    std::optional<std::string> revert_reason;
    std::vector<CallFrame> calls;

    bool operator==(const CallFrame&) const = default;
};

struct PrestateAccount {
    std::optional<u256> balance;
    std::optional<uint64_t> nonce;
    std::optional<std::vector<uint8_t>> code;
    std::optional<std::map<Bytes32, Bytes32>> storage;

    bool operator==(const PrestateAccount&) const = default;

    bool empty() const { return !balance && !nonce && !code && !storage; }
};

using AccountMap = std::map<Address, PrestateAccount>;

// Prestate tracer output for one transaction. `accessed` comes from
// diffMode=false, the (pre, post) pair from diffMode=true; either half may be
// absent if only one mode was fetched.
struct TxPrestate {
    std::optional<AccountMap> accessed;
    std::optional<std::pair<AccountMap, AccountMap>> diff;

    bool operator==(const TxPrestate&) const = default;

    bool has_accessed() const { return accessed.has_value(); }
    bool has_diff() const { return diff.has_value(); }
    const AccountMap& pre() const { return diff->first; }
    const AccountMap& post() const { return diff->second; }
};

// Index-aligned traces for every transaction of one block.
struct BlockTrace {
    uint64_t block_number = 0;
    std::vector<Hash32> tx_hashes;
    std::vector<CallFrame> call_roots;
    std::vector<TxPrestate> prestates;

    std::size_t tx_count() const { return call_roots.size(); }
};

struct ParseDiagnostics {
    std::vector<std::string> warnings;
};

namespace detail {

inline uint64_t u64_from_json_quantity(const json& j, const char* what) {
    if (j.is_number_unsigned()) return j.get<uint64_t>();
    if (j.is_string()) return parse_u64_quantity(j.get_ref<const std::string&>());
    throw ParseError(std::string(what) + ": expected numeric quantity");
}

inline u256 u256_from_json_quantity(const json& j, const char* what) {
    if (j.is_number_unsigned()) return u256(j.get<uint64_t>());
    if (j.is_string()) return parse_u256_quantity(j.get_ref<const std::string&>());
    throw ParseError(std::string(what) + ": expected numeric quantity");
}

inline CallFrame parse_call_frame(const json& j, std::vector<uint32_t>& path,
                                  ParseDiagnostics* diag) {
    if (path.size() > static_cast<std::size_t>(kMaxCallDepth)) {
        throw DepthLimitError("call tree exceeds depth limit " + std::to_string(kMaxCallDepth));
    }
    if (!j.is_object()) throw ParseError("call frame must be an object");

    CallFrame frame;
    auto type_it = j.find("type");
    if (type_it == j.end() || !type_it->is_string()) {
        throw ParseError("call frame missing 'type'");
    }
    frame.call_type = call_type_from_string(type_it->get_ref<const std::string&>());

    auto from_it = j.find("from");
    if (from_it == j.end() || !from_it->is_string()) {
        throw ParseError("call frame missing 'from'");
    }
    frame.from = Address::from_hex(from_it->get_ref<const std::string&>());

    if (auto it = j.find("to"); it != j.end() && it->is_string()) {
        frame.to = Address::from_hex(it->get_ref<const std::string&>());
    } else {
        frame.to = synthetic_address(frame.from, path);
        frame.to_synthetic = true;
    }

    if (auto it = j.find("value"); it != j.end() && !it->is_null()) {
        frame.value = u256_from_json_quantity(*it, "value");
    }
    if (auto it = j.find("gas"); it != j.end() && !it->is_null()) {
        frame.gas = u64_from_json_quantity(*it, "gas");
    }
    if (auto it = j.find("gasUsed"); it != j.end() && !it->is_null()) {
        frame.gas_used = u64_from_json_quantity(*it, "gasUsed");
    }
    if (frame.gas_used > frame.gas && diag) {
        diag->warnings.push_back("frame gasUsed " + std::to_string(frame.gas_used) +
                                 " exceeds gas " + std::to_string(frame.gas));
    }
    if (auto it = j.find("input"); it != j.end() && it->is_string()) {
        frame.input = bytes_from_hex(it->get_ref<const std::string&>());
    }
    if (auto it = j.find("output"); it != j.end() && it->is_string()) {
        frame.output = bytes_from_hex(it->get_ref<const std::string&>());
    }
    if (auto it = j.find("error"); it != j.end() && it->is_string()) {
        frame.error = it->get<std::string>();
    }
    if (auto it = j.find("revertReason"); it != j.end() && it->is_string()) {
        frame.revert_reason = it->get<std::string>();
    }
    if (auto it = j.find("calls"); it != j.end()) {
        if (!it->is_array()) throw ParseError("'calls' must be an array");
        frame.calls.reserve(it->size());
        for (std::size_t i = 0; i < it->size(); ++i) {
            path.push_back(static_cast<uint32_t>(i));
            frame.calls.push_back(parse_call_frame((*it)[i], path, diag));
            path.pop_back();
        }
    }
    return frame;
}

// Unwraps a debug_traceBlockByNumber response body down to the per-tx result
// array. Accepts the full JSON-RPC envelope or a bare array.
inline const json& result_array(const json& doc) {
    if (doc.is_array()) return doc;
    if (doc.is_object()) {
        if (auto it = doc.find("result"); it != doc.end() && it->is_array()) return *it;
        if (auto it = doc.find("error"); it != doc.end()) {
            throw ParseError("document carries an RPC error: " + it->dump());
        }
    }
    throw ParseError("expected a per-transaction result array");
}

// Per-tx elements are either {"txHash":..,"result":{..}} or the bare payload.
inline const json& element_payload(const json& element, std::size_t tx_index) {
    if (!element.is_object()) {
        throw ParseError("tx " + std::to_string(tx_index) + ": element must be an object");
    }
    if (auto it = element.find("result"); it != element.end()) {
        if (!it->is_object()) {
            throw ParseError("tx " + std::to_string(tx_index) + ": 'result' must be an object");
        }
        return *it;
    }
    // A bare call frame carries its own `error` field and stays; an element
    // with an error but no payload is a per-tx trace failure.
    if (element.contains("error") && !element.contains("type")) {
        throw ParseError("tx " + std::to_string(tx_index) +
                         ": trace failed: " + element["error"].dump());
    }
    return element;
}

inline PrestateAccount parse_prestate_account(const json& j, const Address& addr,
                                              std::size_t tx_index) {
    if (!j.is_object()) {
        throw ParseError("tx " + std::to_string(tx_index) + ": account entry for " +
                         addr.to_hex() + " must be an object");
    }
    PrestateAccount acct;
    if (auto it = j.find("balance"); it != j.end() && !it->is_null()) {
        acct.balance = u256_from_json_quantity(*it, "balance");
    }
    if (auto it = j.find("nonce"); it != j.end() && !it->is_null()) {
        acct.nonce = u64_from_json_quantity(*it, "nonce");
    }
    if (auto it = j.find("code"); it != j.end() && it->is_string()) {
        acct.code = bytes_from_hex(it->get_ref<const std::string&>());
    }
    if (auto it = j.find("storage"); it != j.end() && !it->is_null()) {
        if (!it->is_object()) {
            throw ParseError("tx " + std::to_string(tx_index) + ": 'storage' must be an object");
        }
        std::map<Bytes32, Bytes32> slots;
        for (const auto& [slot, value] : it->items()) {
            if (!value.is_string()) {
                throw ParseError("tx " + std::to_string(tx_index) + ": storage value must be hex");
            }
            slots.emplace(Bytes32::from_hex(slot),
                          Bytes32::from_hex(value.get_ref<const std::string&>()));
        }
        acct.storage = std::move(slots);
    }
    if (acct.empty()) {
        throw ParseError("tx " + std::to_string(tx_index) + ": account entry for " +
                         addr.to_hex() + " has no fields");
    }
    return acct;
}

inline AccountMap parse_account_map(const json& j, std::size_t tx_index) {
    if (!j.is_object()) {
        throw ParseError("tx " + std::to_string(tx_index) + ": expected address map");
    }
    AccountMap accounts;
    for (const auto& [key, value] : j.items()) {
        Address addr = Address::from_hex(key);
        accounts.emplace(addr, parse_prestate_account(value, addr, tx_index));
    }
    return accounts;
}

}  // namespace detail

// Parses a callTracer block response: one root frame per transaction, in
// block order.
inline std::vector<CallFrame> parse_call_trace(std::string_view text,
                                               ParseDiagnostics* diag = nullptr) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    const json& txs = detail::result_array(doc);
    std::vector<CallFrame> roots;
    roots.reserve(txs.size());
    for (std::size_t i = 0; i < txs.size(); ++i) {
        const json& payload = detail::element_payload(txs[i], i);
        std::vector<uint32_t> path;
        try {
            roots.push_back(detail::parse_call_frame(payload, path, diag));
        } catch (const DepthLimitError&) {
            throw;
        } catch (const UnknownCallTypeError&) {
            throw;
        } catch (const ParseError& e) {
            throw ParseError("tx " + std::to_string(i) + ": " + e.what());
        }
    }
    return roots;
}

// Parses a prestateTracer block response in the stated mode. diff_mode=false
// yields `accessed` maps; diff_mode=true yields (pre, post) pairs.
inline std::vector<TxPrestate> parse_prestate(std::string_view text, bool diff_mode) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    const json& txs = detail::result_array(doc);
    std::vector<TxPrestate> out;
    out.reserve(txs.size());
    for (std::size_t i = 0; i < txs.size(); ++i) {
        const json& payload = detail::element_payload(txs[i], i);
        bool looks_like_diff = payload.is_object() && payload.contains("pre") &&
                               payload.contains("post");
        TxPrestate tx;
        if (diff_mode) {
            if (!looks_like_diff) {
                throw ModeMismatchError("tx " + std::to_string(i) +
                                        ": diffMode=true requested but document lacks pre/post");
            }
            tx.diff = std::make_pair(detail::parse_account_map(payload["pre"], i),
                                     detail::parse_account_map(payload["post"], i));
        } else {
            if (looks_like_diff) {
                throw ModeMismatchError("tx " + std::to_string(i) +
                                        ": diffMode=false requested but document has pre/post");
            }
            tx.accessed = detail::parse_account_map(payload, i);
        }
        out.push_back(std::move(tx));
    }
    return out;
}

// Transaction hashes from a block response; zero hash where absent.
inline std::vector<Hash32> parse_tx_hashes(std::string_view text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw ParseError("invalid JSON");
    const json& txs = detail::result_array(doc);
    std::vector<Hash32> hashes(txs.size());
    for (std::size_t i = 0; i < txs.size(); ++i) {
        if (txs[i].is_object()) {
            if (auto it = txs[i].find("txHash"); it != txs[i].end() && it->is_string()) {
                hashes[i] = Hash32::from_hex(it->get_ref<const std::string&>());
            }
        }
    }
    return hashes;
}

// Zips the three tracer documents of one block into an index-aligned trace.
inline BlockTrace assemble_block_trace(uint64_t block_number, std::string_view call_doc,
                                       std::string_view prestate_doc,
                                       std::string_view prestate_diff_doc,
                                       ParseDiagnostics* diag = nullptr) {
    BlockTrace block;
    block.block_number = block_number;
    block.call_roots = parse_call_trace(call_doc, diag);
    block.tx_hashes = parse_tx_hashes(call_doc);
    std::vector<TxPrestate> accessed = parse_prestate(prestate_doc, false);
    std::vector<TxPrestate> diffs = parse_prestate(prestate_diff_doc, true);
    if (accessed.size() != block.call_roots.size() || diffs.size() != block.call_roots.size()) {
        throw ParseError("block " + std::to_string(block_number) +
                         ": tracer documents disagree on transaction count (call=" +
                         std::to_string(block.call_roots.size()) +
                         " prestate=" + std::to_string(accessed.size()) +
                         " diff=" + std::to_string(diffs.size()) + ")");
    }
    block.prestates.resize(accessed.size());
    for (std::size_t i = 0; i < accessed.size(); ++i) {
        block.prestates[i].accessed = std::move(accessed[i].accessed);
        block.prestates[i].diff = std::move(diffs[i].diff);
    }
    return block;
}

// --- serialization back to the tracer wire format (round-trip support) ---

inline json to_json(const PrestateAccount& acct) {
    json j = json::object();
    if (acct.balance) j["balance"] = to_hex_quantity(*acct.balance);
    if (acct.nonce) j["nonce"] = *acct.nonce;
    if (acct.code) j["code"] = hex_from_bytes(*acct.code);
    if (acct.storage) {
        json slots = json::object();
        for (const auto& [slot, value] : *acct.storage) {
            slots[slot.to_hex()] = value.to_hex();
        }
        j["storage"] = std::move(slots);
    }
    return j;
}

inline json to_json(const AccountMap& accounts) {
    json j = json::object();
    for (const auto& [addr, acct] : accounts) {
        j[addr.to_hex()] = to_json(acct);
    }
    return j;
}

inline json to_json(const CallFrame& frame) {
    json j = json::object();
    j["type"] = to_string(frame.call_type);
    j["from"] = frame.from.to_hex();
    if (!frame.to_synthetic) j["to"] = frame.to.to_hex();
    j["value"] = to_hex_quantity(frame.value);
    j["gas"] = to_hex_quantity(frame.gas);
    j["gasUsed"] = to_hex_quantity(frame.gas_used);
    j["input"] = hex_from_bytes(frame.input);
    if (frame.output) j["output"] = hex_from_bytes(*frame.output);
    if (frame.error) j["error"] = *frame.error;
    if (frame.revert_reason) j["revertReason"] = *frame.revert_reason;
    if (!frame.calls.empty()) {
        json calls = json::array();
        for (const CallFrame& sub : frame.calls) calls.push_back(to_json(sub));
        j["calls"] = std::move(calls);
    }
    return j;
}

// Renders a full block response body (JSON-RPC envelope) for the given kind
// of per-tx payloads.
template <typename PayloadFn>
inline std::string render_block_response(std::size_t tx_count, const std::vector<Hash32>& hashes,
                                         PayloadFn&& payload_for_tx) {
    json result = json::array();
    for (std::size_t i = 0; i < tx_count; ++i) {
        json element = json::object();
        if (i < hashes.size()) element["txHash"] = hashes[i].to_hex();
        element["result"] = payload_for_tx(i);
        result.push_back(std::move(element));
    }
    json body{{"jsonrpc", "2.0"}, {"id", 1}, {"result", std::move(result)}};
    return body.dump();
}

inline std::string render_call_trace(const std::vector<CallFrame>& roots,
                                     const std::vector<Hash32>& hashes = {}) {
    return render_block_response(roots.size(), hashes,
                                 [&](std::size_t i) { return to_json(roots[i]); });
}

inline std::string render_prestate(const std::vector<TxPrestate>& txs, bool diff_mode,
                                   const std::vector<Hash32>& hashes = {}) {
    return render_block_response(txs.size(), hashes, [&](std::size_t i) {
        if (diff_mode) {
            if (!txs[i].has_diff()) throw MissingDataError("tx lacks diff data");
            return json{{"pre", to_json(txs[i].pre())}, {"post", to_json(txs[i].post())}};
        }
        if (!txs[i].has_accessed()) throw MissingDataError("tx lacks accessed data");
        return to_json(*txs[i].accessed);
    });
}

}  // namespace ethcg
