#!/usr/bin/env python3
"""Regenerates the bundled offline fixture corpus (deterministic).

Emits fixtures/reports/<sha256>.json (VirusTotal v3 style file objects),
fixtures/hashes.txt, fixtures/labels.json. Fifty Android apps in five
behavior groups whose permissions correlate with their labels, plus two
edge-case reports used only by unit tests.
"""

import hashlib
import json
import pathlib
import random

ROOT = pathlib.Path(__file__).resolve().parent.parent
OUT = ROOT / "fixtures"

# The first hash is pinned so downstream examples stay stable.
PINNED_SHA = "f919be6a1920b2c206c62ae03ac69fad9955564618874245e91cd0aed051ed78"

GROUPS = [
    {
        "name": "smsgrab",
        "techniques": ["T1636", "T1646"],
        "extra_tactics": [],
        "permissions": [
            "android.permission.READ_SMS",
            "android.permission.RECEIVE_SMS",
        ],
        "services": ["com.smsgrab.UploadService"],
        "receivers": ["com.smsgrab.SmsReceiver"],
        "intent_actions": ["android.provider.Telephony.SMS_RECEIVED"],
    },
    {
        "name": "overlaybank",
        "techniques": ["T1417", "T1516"],
        "extra_tactics": [],
        "permissions": [
            "android.permission.BIND_ACCESSIBILITY_SERVICE",
            "android.permission.SYSTEM_ALERT_WINDOW",
        ],
        "services": ["com.overlaybank.A11yService"],
        "receivers": [],
        "intent_actions": ["android.accessibilityservice.AccessibilityService"],
    },
    {
        "name": "spy",
        "techniques": ["T1429", "T1430", "T1533"],
        "extra_tactics": [],
        "permissions": [
            "android.permission.RECORD_AUDIO",
            "android.permission.ACCESS_FINE_LOCATION",
            "android.permission.READ_EXTERNAL_STORAGE",
        ],
        "services": ["com.spy.TrackService"],
        "receivers": ["com.spy.LocationReceiver"],
        "intent_actions": [],
    },
    {
        "name": "dropper",
        "techniques": ["T1404", "T1398", "T1575"],
        "extra_tactics": ["Initial Access"],
        "permissions": [
            "android.permission.REQUEST_INSTALL_PACKAGES",
            "android.permission.RECEIVE_BOOT_COMPLETED",
        ],
        "services": [],
        "receivers": ["com.dropper.BootReceiver"],
        "intent_actions": ["android.intent.action.BOOT_COMPLETED"],
    },
    {
        "name": "c2bot",
        "techniques": ["T1437", "T1521", "T1624", "T1421"],
        "extra_tactics": [],
        "permissions": [
            "android.permission.ACCESS_NETWORK_STATE",
            "android.permission.FOREGROUND_SERVICE",
        ],
        "services": ["com.c2bot.BeaconService"],
        "receivers": ["com.c2bot.NetReceiver"],
        "intent_actions": [],
    },
]

COMMON_PERMS = ["android.permission.INTERNET", "android.permission.WAKE_LOCK"]
NOISE_PERMS = [
    "android.permission.VIBRATE",
    "android.permission.CAMERA",
    "android.permission.BLUETOOTH",
    "android.permission.NFC",
    "android.permission.READ_CONTACTS",
    "android.permission.GET_ACCOUNTS",
]


def sha_for(tag):
    return hashlib.sha256(f"droidttp-fixture-{tag}".encode()).hexdigest()


def report(sha, type_tag, androguard):
    obj = {
        "data": {
            "id": sha,
            "type": "file",
            "attributes": {"androguard": androguard},
        }
    }
    if type_tag is not None:
        obj["data"]["attributes"]["type_tag"] = type_tag
    return obj


def write(path, obj):
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def main():
    rng = random.Random(20240901)
    reports_dir = OUT / "reports"
    reports_dir.mkdir(parents=True, exist_ok=True)

    hashes = []
    labels = {}
    for i in range(50):
        group = GROUPS[i // 10]
        sha = PINNED_SHA if i == 0 else sha_for(i)
        hashes.append(sha)

        perms = sorted(
            set(
                group["permissions"]
                + COMMON_PERMS
                + rng.sample(NOISE_PERMS, rng.randint(0, 3))
            )
        )
        app = f"com.{group['name']}.app{i:02d}"
        androguard = {
            "permissions": perms,
            "activities": [f"{app}.MainActivity", f"{app}.SettingsActivity"],
            "services": group["services"],
            "receivers": group["receivers"],
            "intent_actions": group["intent_actions"]
            + ["android.intent.action.MAIN"],
            "intent_categories": ["android.intent.category.LAUNCHER"],
        }
        write(reports_dir / f"{sha}.json", report(sha, "android", androguard))
        labels[sha] = {
            "tactics": group["extra_tactics"],
            "techniques": group["techniques"],
        }

    # edge cases for unit tests only (not listed in hashes.txt / labels.json)
    write(
        reports_dir / f"{sha_for('nonandroid')}.json",
        report(sha_for("nonandroid"), "peexe", {}),
    )
    write(
        reports_dir / f"{sha_for('notype')}.json",
        report(sha_for("notype"), None, {"permissions": COMMON_PERMS}),
    )

    (OUT / "hashes.txt").write_text("\n".join(hashes) + "\n")
    write(OUT / "labels.json", labels)
    print(f"wrote {len(hashes)} fixture reports to {reports_dir}")


if __name__ == "__main__":
    main()
