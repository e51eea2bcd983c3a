// casr/util/io.h

// Copyright 2026  CASR Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef CASR_UTIL_IO_H_
#define CASR_UTIL_IO_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace casr {

// Little-endian primitives for the binary file formats (spectrogram,
// checkpoint). The host is assumed little-endian; asserted once at startup
// of any reader/writer.

void write_u32(std::ostream& os, uint32_t v);
void write_u64(std::ostream& os, uint64_t v);
void write_f32(std::ostream& os, float v);
void write_f32_array(std::ostream& os, const double* data, size_t n);
void write_string(std::ostream& os, const std::string& s);  // u32 length + bytes

uint32_t read_u32(std::istream& is);
uint64_t read_u64(std::istream& is);
float read_f32(std::istream& is);
void read_f32_array(std::istream& is, double* data, size_t n);
std::string read_string(std::istream& is);

std::string slurp_file(const std::string& path);
void spit_file(const std::string& path, const std::string& content);

// FNV-1a 64-bit over a byte string. Used for checkpoint parameter hashes.
uint64_t fnv1a64(const void* data, size_t n);
uint64_t fnv1a64(const std::string& bytes);

}  // namespace casr

#endif  // CASR_UTIL_IO_H_
