#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "idsim/error.hpp"

namespace idsim {

// Ordered list of system-call names. Order is significant: every process
// vector in a dataset is aligned to one vocabulary, coordinate by coordinate.
struct Vocabulary {
    std::vector<std::string> names;

    std::size_t size() const { return names.size(); }

    // Unique, non-empty names; at least one entry.
    void validate() const {
        if (names.empty())
            throw Error("vocabulary: empty");
        std::unordered_set<std::string> seen;
        for (const auto& n : names) {
            if (n.empty())
                throw Error("vocabulary: empty call name");
            if (!seen.insert(n).second)
                throw Error("vocabulary: duplicate call name '" + n + "'");
        }
    }

    bool operator==(const Vocabulary&) const = default;
};

// Removes every excluded name from raw_names, preserving order. This is how
// a raw audit-call list is cut down to the working vocabulary (e.g. the BSM
// 60-call list reduced to 50 by dropping near-duplicate call variants).
inline Vocabulary normalize_vocabulary(std::span<const std::string> raw_names,
                                       std::span<const std::string> exclusion_list) {
    if (raw_names.empty())
        throw Error("normalize_vocabulary: raw name list is empty");
    std::unordered_set<std::string> excluded(exclusion_list.begin(), exclusion_list.end());
    Vocabulary out;
    for (const auto& n : raw_names)
        if (!excluded.contains(n))
            out.names.push_back(n);
    if (out.names.empty())
        throw Error("normalize_vocabulary: empty vocabulary after exclusion");
    out.validate();
    return out;
}

// The 50 Solaris BSM audit calls used as the standard working vocabulary for
// host trace matrices.
inline const std::vector<std::string>& bsm_call_names() {
    static const std::vector<std::string> names = {
        "access",    "audit",     "auditon",   "chdir",    "chmod",
        "chown",     "close",     "creat",     "execve",   "exit",
        "fchdir",    "fchown",    "fcntl",     "fork",     "fork1",
        "getaudit",  "getmsg",    "ioctl",     "kill",     "link",
        "login",     "logout",    "lstat",     "memcntl",  "mkdir",
        "mmap",      "munmap",    "oldnice",   "oldsetgid", "oldsetuid",
        "oldutime",  "open",      "pathdonf",  "pipe",     "putmsg",
        "readlink",  "rename",    "rmdir",     "setaudit", "setegid",
        "seteuid",   "setgroups", "setpgrp",   "setrlimit", "stat",
        "statvfs",   "su",        "sysinfo",   "unlink",   "vfork",
    };
    return names;
}

// Call variants dropped when normalizing the raw 60-call audit list down to
// bsm_call_names().
inline const std::vector<std::string>& bsm_excluded_call_names() {
    static const std::vector<std::string> names = {
        "audition", "setuid", "setgid", "nice", "utime",
        "ace",      "crew",   "boom",   "dog",  "eon",
    };
    return names;
}

}  // namespace idsim
