// Copyright 2026 The ethcg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace ethcg {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed tracer documents, bad hex, structural violations.
struct ParseError : Error {
    using Error::Error;
};

struct UnknownCallTypeError : ParseError {
    using ParseError::ParseError;
};

struct DepthLimitError : ParseError {
    using ParseError::ParseError;
};

// Prestate document shape does not match the requested diff mode.
struct ModeMismatchError : ParseError {
    using ParseError::ParseError;
};

// An operation needs tracer data the caller did not supply.
struct MissingDataError : Error {
    using Error::Error;
};

// Access sets of mixed granularity (or the wrong granularity for an op).
struct GranularityError : Error {
    using Error::Error;
};

struct InvalidArgumentError : Error {
    using Error::Error;
};

struct InvalidColoringError : Error {
    using Error::Error;
};

struct InsufficientDataError : Error {
    using Error::Error;
};

struct UnknownMetricError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

struct CorruptRecordError : IoError {
    CorruptRecordError(std::size_t line, const std::string& what)
        : IoError("record line " + std::to_string(line) + ": " + what), line_number(line) {}
    std::size_t line_number;
};

struct SchemaVersionError : Error {
    using Error::Error;
};

struct RpcTransportError : Error {
    using Error::Error;
};

// JSON-RPC error object returned by the node.
struct RpcError : Error {
    RpcError(int c, const std::string& message)
        : Error("rpc error " + std::to_string(c) + ": " + message), code(c) {}
    int code;
};

// Endpoint misconfiguration (e.g. node without the debug API).
struct ConfigError : Error {
    using Error::Error;
};

struct UsageError : Error {
    using Error::Error;
};

}  // namespace ethcg
