from datetime import datetime
import os, json

rp = os.path.normpath(os.path.dirname(os.path.abspath(__file__)) + '/../')
dp = os.path.join(rp, 'results')
if not os.path.exists(dp):
    os.makedirs(dp)

# Run state shared by the CLI jobs
loglevel = 'INFO'
quiet = False
threads = None

current_job = None
checks = []
artifacts = []


def logger(message, lvl):
    if loglevel == 'DEBUG':
        dt = datetime.now().strftime("%Y-%m-%d %H:%M:%S.%f")
        print('%s :[DEBUG]: %s' % (str(dt), str(message)))
    elif loglevel == lvl:
        dt = datetime.now().strftime("%Y-%m-%d %H:%M:%S.%f")
        print('%s :[%s]: %s' % (str(dt), str(lvl), str(message)))
    elif lvl == 'ERROR':
        dt = datetime.now().strftime("%Y-%m-%d %H:%M:%S.%f")
        print('%s :[ERROR]: %s' % (str(dt), str(message)))
    return


def record_check(name, passed, value=None, hard=True):
    """Append one pass/fail line to the job summary."""
    checks.append({
        'name': name,
        'passed': bool(passed),
        'value': value,
        'hard': hard,
    })
    return passed


def reset_run():
    global current_job
    current_job = None
    del checks[:]
    del artifacts[:]


def set_cache(key, value):
    file = os.path.join(dp, 'golden.json')
    data = {}
    if os.path.exists(file):
        with open(file, 'r', encoding='utf-8') as fh:
            data = json.load(fh)
    data[str(key)] = value
    with open(file, 'w', encoding='utf-8') as fh:
        json.dump(data, fh, indent=2, sort_keys=True)


def get_cache(key):
    file = os.path.join(dp, 'golden.json')
    if not os.path.exists(file):
        return None
    with open(file, 'r', encoding='utf-8') as fh:
        data = json.load(fh)
    return data.get(str(key))


def check_cache(key):
    return get_cache(key) is not None
