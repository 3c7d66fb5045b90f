import os
import re
import json
import logging
import datetime
import tempfile


log = logging.getLogger('psitm.workbench.products')


# CSV numeric formatting: 12 significant digits, '.' decimal separator
FLOAT_FORMAT = '%.12g'

ISO_DATE_REGEX = re.compile(r'^\d{4}-\d{2}-\d{2}$')
SAFE_NAME_REGEX = re.compile(r'^[A-Za-z0-9_.-]+$')


def today():
    return datetime.date.today().isoformat()


class ResultsDirectory(object):
    """
    Dated output directory '<root>/results/<ISO-date>/'. Files are only ever
    written inside it, each one atomically (written to a temporary file in
    the same directory, then renamed).

    Parameters
    ----------
    root : str
        Base output directory
    date : str or None
        ISO date (YYYY-MM-DD); today's date if None
    """
    def __init__(self, root='.', date=None):
        date = date or today()
        if not ISO_DATE_REGEX.match(date):
            raise ValueError(f"date must be in ISO format YYYY-MM-DD, got {date!r}")
        self.root = os.path.realpath(root)
        self.date = date
        self.path = os.path.join(self.root, 'results', date)
        self.written = []

    def ensure(self):
        os.makedirs(self.path, exist_ok=True)
        return self.path

    def filename(self, name):
        """ Full path of a product, refusing anything outside the directory """
        if not SAFE_NAME_REGEX.match(name) or name in ('.', '..'):
            raise ValueError(f"Invalid product file name {name!r}")
        return os.path.join(self.path, name)

    def write_text(self, name, text):
        """ Atomically write 'text' to the product file 'name' """
        return self.write_bytes(name, text.encode('utf-8'))

    def write_bytes(self, name, data):
        """ Atomically write 'data' to the product file 'name' """
        self.ensure()
        fname = self.filename(name)
        fd, tmp = tempfile.mkstemp(prefix=f'.{name}.', suffix='.tmp', dir=self.path)
        try:
            with os.fdopen(fd, 'wb') as fobj:
                fobj.write(data)
            os.replace(tmp, fname)
        except BaseException:
            if os.path.exists(tmp):
                os.remove(tmp)
            raise
        if name not in self.written:
            self.written.append(name)
        log.info(f"Saved {fname!r}")
        return fname

    def write_csv(self, name, df):
        """ Atomically write a DataFrame as CSV with the fixed numeric format """
        text = df.to_csv(sep=',', index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
        return self.write_text(name, text)

    def write_manifest(self, manifest):
        text = json.dumps(dict(manifest), indent=4, sort_keys=True) + "\n"
        return self.write_text('manifest.json', text)

    def __str__(self):
        name = type(self).__name__
        return f"{name}({self.path!r})"

    def __repr__(self):
        return str(self)