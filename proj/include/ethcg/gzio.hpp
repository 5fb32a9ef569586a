// Copyright 2026 The ethcg Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstring>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <zlib.h>

#include "ethcg/errors.hpp"

namespace ethcg {

class GzWriter {
  public:
    explicit GzWriter(const std::filesystem::path& path) : path_(path) {
        file_ = gzopen(path.c_str(), "wb");
        if (!file_) throw IoError("cannot open for write: " + path.string());
    }

    GzWriter(const GzWriter&) = delete;
    GzWriter& operator=(const GzWriter&) = delete;

    ~GzWriter() {
        if (file_) gzclose(file_);
    }

    void write(std::string_view data) {
        if (data.empty()) return;
        int written = gzwrite(file_, data.data(), static_cast<unsigned>(data.size()));
        if (written <= 0 || static_cast<std::size_t>(written) != data.size()) {
            throw IoError("short write to " + path_.string());
        }
    }

    void write_line(std::string_view line) {
        write(line);
        write("\n");
    }

    void close() {
        if (file_ && gzclose(file_) != Z_OK) {
            file_ = nullptr;
            throw IoError("close failed for " + path_.string());
        }
        file_ = nullptr;
    }

  private:
    std::filesystem::path path_;
    gzFile file_ = nullptr;
};

class GzReader {
  public:
    explicit GzReader(const std::filesystem::path& path) : path_(path) {
        file_ = gzopen(path.c_str(), "rb");
        if (!file_) throw IoError("cannot open for read: " + path.string());
    }

    GzReader(const GzReader&) = delete;
    GzReader& operator=(const GzReader&) = delete;

    ~GzReader() {
        if (file_) gzclose(file_);
    }

    // Next line without its terminator; nullopt at end of stream.
    std::optional<std::string> read_line() {
        std::string line;
        char buf[4096];
        while (true) {
            if (gzgets(file_, buf, sizeof(buf)) == nullptr) {
                int errnum = 0;
                const char* msg = gzerror(file_, &errnum);
                if (errnum != Z_OK && errnum != Z_STREAM_END) {
                    throw IoError("read failed for " + path_.string() + ": " + msg);
                }
                if (line.empty()) return std::nullopt;
                return line;
            }
            std::size_t len = std::strlen(buf);
            if (len > 0 && buf[len - 1] == '\n') {
                line.append(buf, len - 1);
                return line;
            }
            line.append(buf, len);
        }
    }

    std::string read_all() {
        std::string out;
        char buf[1 << 16];
        while (true) {
            int got = gzread(file_, buf, sizeof(buf));
            if (got < 0) throw IoError("read failed for " + path_.string());
            if (got == 0) break;
            out.append(buf, static_cast<std::size_t>(got));
        }
        return out;
    }

  private:
    std::filesystem::path path_;
    gzFile file_ = nullptr;
};

inline void gzip_write_all(const std::filesystem::path& path, std::string_view data) {
    GzWriter writer(path);
    writer.write(data);
    writer.close();
}

inline std::string gzip_read_all(const std::filesystem::path& path) {
    return GzReader(path).read_all();
}

}  // namespace ethcg
