/* Minimal consumer of the calbehav C API: mines two tiny weekly events
 * and prints the rules plus one prediction.
 *
 * Build (from the repository root, after `cargo build -p calbehav-ffi`):
 *   cc examples/demo.c -Icrates/calbehav-ffi/include \
 *      -Ltarget/debug -lcalbehav_ffi -o demo
 *   LD_LIBRARY_PATH=target/debug ./demo
 */

#include <calbehav.h>
#include <stdio.h>

static const char *CALENDAR =
    "BEGIN:VEVENT\n"
    "UID:lecture\n"
    "SUMMARY:Lecture\n"
    "DTSTART:20160606T100000\n"
    "DTEND:20160606T120000\n"
    "RRULE:FREQ=WEEKLY;BYDAY=MO\n"
    "END:VEVENT\n"
    "BEGIN:VEVENT\n"
    "UID:chat\n"
    "SUMMARY:Chat\n"
    "DTSTART:20160608T150000\n"
    "DTEND:20160608T160000\n"
    "RRULE:FREQ=WEEKLY;BYDAY=WE\n"
    "END:VEVENT\n";

static const char *CALLS =
    "timestamp,call_type,duration_sec,contact\n"
    "2016-06-06 10:30:00,incoming,0,alice\n"
    "2016-06-13 10:30:00,incoming,0,alice\n"
    "2016-06-20 10:30:00,incoming,0,alice\n"
    "2016-06-08 15:30:00,incoming,60,bob\n"
    "2016-06-15 15:30:00,incoming,45,bob\n"
    "2016-06-22 15:30:00,incoming,30,bob\n";

int main(void) {
    printf("calbehav %s\n", calbehav_version());

    CalbehavRules *rules = NULL;
    CalbehavStatus status =
        calbehav_mine(CALENDAR, CALLS, NULL, NULL, NULL, 0, false, &rules);
    if (status != CALBEHAV_STATUS_OK) {
        fprintf(stderr, "mine failed (%d): %s\n", (int)status, calbehav_last_error());
        return 1;
    }
    printf("mined %zu rules\n", calbehav_rules_len(rules));

    char *text = NULL;
    if (calbehav_rules_text(rules, &text) == CALBEHAV_STATUS_OK) {
        fputs(text, stdout);
        calbehav_string_free(text);
    }

    CalbehavBehavior behavior = CALBEHAV_BEHAVIOR_NONE;
    status = calbehav_rules_match(rules, "Lecture", "Recurring",
                                  "Monday[10:00-12:00]", "unknown", &behavior);
    if (status != CALBEHAV_STATUS_OK) {
        fprintf(stderr, "match failed: %s\n", calbehav_last_error());
        calbehav_rules_free(rules);
        return 1;
    }
    printf("Lecture on Monday morning -> %s\n",
           behavior == CALBEHAV_BEHAVIOR_REJECT   ? "Reject"
           : behavior == CALBEHAV_BEHAVIOR_ACCEPT ? "Accept"
           : behavior == CALBEHAV_BEHAVIOR_MISSED ? "Missed"
                                                  : "no rule");

    calbehav_rules_free(rules);
    return 0;
}
