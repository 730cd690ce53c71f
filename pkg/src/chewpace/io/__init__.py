from .audio import iter_wav_blocks, read_pcm_stream, read_wav, wav_pcm_payload, write_wav
from .eventlog import (
    EventLogWriter,
    events_from_records,
    read_event_log,
    timeline_from_records,
    write_event_log,
)
from .reports import write_report_csv
from .synth import (
    BurstTemplate,
    SynthMeal,
    SynthMealSpec,
    corpus_specs,
    render_corpus,
    synth_meal,
    write_synth_meal,
)

__all__ = [
    "BurstTemplate",
    "EventLogWriter",
    "SynthMeal",
    "SynthMealSpec",
    "corpus_specs",
    "events_from_records",
    "iter_wav_blocks",
    "read_event_log",
    "read_pcm_stream",
    "read_wav",
    "render_corpus",
    "synth_meal",
    "timeline_from_records",
    "wav_pcm_payload",
    "write_event_log",
    "write_report_csv",
    "write_synth_meal",
]
